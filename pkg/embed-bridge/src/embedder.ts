import { Embedder, ModelUnavailable } from './types.js';

export const DEFAULT_MODEL = 'Xenova/codebert-base';

/**
 * Feature extraction through a pretrained transformer encoder.
 *
 * Pooling takes the summary-token (first position) hidden state; inputs past
 * the encoder's context window are head-truncated and flagged.
 */
export class TransformerEmbedder implements Embedder {
  private constructor(
    private readonly extractor: any,
    private readonly maxLength: number,
  ) {}

  static async load(modelName: string = DEFAULT_MODEL): Promise<TransformerEmbedder> {
    // transformers.js hard-requires sharp at module init; probing it first
    // turns a broken native install into a clean failure instead of a
    // floating rejection out of the library's own lazy imports
    const imageDependency = 'sharp';
    try {
      await import(imageDependency);
    } catch (cause) {
      throw new ModelUnavailable(modelName, cause);
    }
    let extractor: any;
    try {
      const { pipeline } = await import('@xenova/transformers');
      extractor = await pipeline('feature-extraction', modelName);
    } catch (cause) {
      throw new ModelUnavailable(modelName, cause);
    }
    const maxLength: number = extractor.tokenizer?.model_max_length ?? 512;
    return new TransformerEmbedder(extractor, maxLength);
  }

  async embed(codeText: string): Promise<{ vector: number[]; truncated: boolean }> {
    const encoded = await this.extractor.tokenizer(codeText);
    const tokenCount: number = encoded.input_ids.dims.at(-1) ?? 0;
    const truncated = tokenCount > this.maxLength;

    // token-level activations, dims [1, tokens, hidden]; keep position 0
    const output = await this.extractor(codeText);
    const [, , hidden] = output.dims;
    const vector = Array.from(output.data.slice(0, hidden) as Float32Array, Number);
    return { vector, truncated };
  }
}

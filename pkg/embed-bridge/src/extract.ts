import { Embedder, EmbeddingRecord, FragmentRequest, TokenizationFailure } from './types.js';

/**
 * Embed each fragment in request order. Identical fragments get identical
 * vectors by construction (the encoder runs in inference mode and the result
 * for a repeated text is reused).
 */
export async function extractEmbeddings(
  requests: FragmentRequest[],
  embedder: Embedder,
): Promise<EmbeddingRecord[]> {
  const memo = new Map<string, { vector: number[]; truncated: boolean }>();
  const records: EmbeddingRecord[] = [];
  for (const request of requests) {
    if (!request.codeText.trim()) {
      throw new TokenizationFailure(request.id, 'empty code fragment');
    }
    let result = memo.get(request.codeText);
    if (result === undefined) {
      try {
        result = await embedder.embed(request.codeText);
      } catch (cause) {
        if (cause instanceof TokenizationFailure) {
          throw cause;
        }
        throw new TokenizationFailure(request.id, cause);
      }
      memo.set(request.codeText, result);
    }
    if (!result.vector.every(Number.isFinite)) {
      throw new TokenizationFailure(request.id, 'encoder produced non-finite values');
    }
    const record: EmbeddingRecord = {
      id: request.id,
      dim: result.vector.length,
      vector: result.vector,
    };
    if (result.truncated) {
      record.truncated = true;
    }
    records.push(record);
  }
  const dims = new Set(records.map((r) => r.dim));
  if (dims.size > 1) {
    throw new Error(`non-uniform embedding dimensions: ${[...dims].join(', ')}`);
  }
  return records;
}

export const ROLES = ['buggy', 'patched', 'groundtruth'] as const;
export type Role = (typeof ROLES)[number];

export interface FragmentRequest {
  /** "<patchId>:<role>" — the exchange-file id. */
  id: string;
  role: Role;
  codeText: string;
}

export interface EmbeddingRecord {
  id: string;
  dim: number;
  vector: number[];
  /** Set when the fragment exceeded the encoder's context and was head-truncated. */
  truncated?: boolean;
}

/** Turns a code fragment into a fixed-dimension vector. */
export interface Embedder {
  embed(codeText: string): Promise<{ vector: number[]; truncated: boolean }>;
}

export class ModelUnavailable extends Error {
  constructor(modelName: string, cause: unknown) {
    super(`cannot load encoder ${modelName}: ${cause instanceof Error ? cause.message : cause}`);
    this.name = 'ModelUnavailable';
  }
}

export class TokenizationFailure extends Error {
  constructor(id: string, cause: unknown) {
    super(`fragment ${id}: ${cause instanceof Error ? cause.message : cause}`);
    this.name = 'TokenizationFailure';
  }
}

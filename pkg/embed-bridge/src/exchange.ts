import { writeFileSync } from 'node:fs';

import { EmbeddingRecord } from './types.js';

/** JSON Lines: {"id", "dim", "vector"[, "truncated"]} per record. */
export function exchangeLines(records: EmbeddingRecord[]): string {
  return records.map((record) => JSON.stringify(record)).join('\n') + '\n';
}

export function writeExchangeFile(path: string, records: EmbeddingRecord[]): void {
  writeFileSync(path, exchangeLines(records), 'utf-8');
}

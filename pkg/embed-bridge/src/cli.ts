#!/usr/bin/env node
/**
 * embed-bridge extract --manifest <patch manifest> --out embeddings.jsonl [--model <name>]
 *
 * Exit codes: 0 success, 1 usage error, 2 data/model error.
 */

import { DEFAULT_MODEL, TransformerEmbedder } from './embedder.js';
import { writeExchangeFile } from './exchange.js';
import { extractEmbeddings } from './extract.js';
import { fragmentsFromManifest } from './manifest.js';
import { ModelUnavailable, TokenizationFailure } from './types.js';

function parseArgs(argv: string[]): { manifest: string; out: string; model: string } {
  if (argv[0] !== 'extract') {
    throw new UsageError(`unknown command ${argv[0] ?? '<none>'}; expected "extract"`);
  }
  const options: Record<string, string> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith('--') || value === undefined) {
      throw new UsageError(`bad argument ${flag}`);
    }
    options[flag.slice(2)] = value;
  }
  const { manifest, out, model = DEFAULT_MODEL } = options;
  if (!manifest || !out) {
    throw new UsageError('--manifest and --out are required');
  }
  return { manifest, out, model };
}

class UsageError extends Error {}

async function main(argv: string[]): Promise<number> {
  let args: ReturnType<typeof parseArgs>;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const requests = fragmentsFromManifest(args.manifest);
    const embedder = await TransformerEmbedder.load(args.model);
    const records = await extractEmbeddings(requests, embedder);
    writeExchangeFile(args.out, records);
    const dim = records[0]?.dim ?? 0;
    console.log(`wrote ${records.length} embedding(s) (dim ${dim}) to ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof ModelUnavailable || err instanceof TokenizationFailure) {
      console.error(`${err.name}: ${err.message}`);
    } else {
      console.error(`error: ${(err as Error).message}`);
    }
    return 2;
  }
}

main(process.argv.slice(2)).then((code) => {
  process.exitCode = code;
});

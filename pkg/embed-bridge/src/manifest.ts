import { readFileSync } from 'node:fs';
import { dirname, resolve } from 'node:path';

import { FragmentRequest, ROLES, Role } from './types.js';

interface ManifestEntry {
  id: string;
  code_paths?: Partial<Record<Role, string>>;
}

/**
 * Read a patch manifest (JSON array of records) and produce one fragment
 * request per available code role, ids shaped "<patchId>:<role>". Paths are
 * resolved against the manifest's directory.
 */
export function fragmentsFromManifest(manifestPath: string): FragmentRequest[] {
  const raw = JSON.parse(readFileSync(manifestPath, 'utf-8'));
  if (!Array.isArray(raw)) {
    throw new Error('manifest must be a JSON array of patch records');
  }
  const base = dirname(manifestPath);
  const requests: FragmentRequest[] = [];
  for (const entry of raw as ManifestEntry[]) {
    if (!entry.id) {
      throw new Error('manifest entry without an id');
    }
    for (const role of ROLES) {
      const rel = entry.code_paths?.[role];
      if (!rel) {
        continue;
      }
      const codeText = readFileSync(resolve(base, rel), 'utf-8');
      requests.push({ id: `${entry.id}:${role}`, role, codeText });
    }
  }
  return requests;
}

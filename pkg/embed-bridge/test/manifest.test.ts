import assert from 'node:assert/strict';
import { mkdtempSync, writeFileSync, mkdirSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import test from 'node:test';

import { fragmentsFromManifest } from '../src/manifest.js';

test('resolves code paths relative to the manifest and skips absent roles', () => {
  const dir = mkdtempSync(join(tmpdir(), 'embed-bridge-manifest-'));
  mkdirSync(join(dir, 'nested'));
  writeFileSync(join(dir, 'nested', 'p.java'), 'patched text');
  const manifest = [
    { id: 'only-patched', code_paths: { patched: 'nested/p.java' } },
    { id: 'no-code' },
  ];
  const path = join(dir, 'manifest.json');
  writeFileSync(path, JSON.stringify(manifest));
  const requests = fragmentsFromManifest(path);
  assert.equal(requests.length, 1);
  assert.equal(requests[0].id, 'only-patched:patched');
  assert.equal(requests[0].role, 'patched');
  assert.equal(requests[0].codeText, 'patched text');
});

test('rejects manifests that are not arrays or lack ids', () => {
  const dir = mkdtempSync(join(tmpdir(), 'embed-bridge-manifest-'));
  const notArray = join(dir, 'object.json');
  writeFileSync(notArray, JSON.stringify({ id: 'x' }));
  assert.throws(() => fragmentsFromManifest(notArray), /JSON array/);

  const noId = join(dir, 'noid.json');
  writeFileSync(noId, JSON.stringify([{ code_paths: {} }]));
  assert.throws(() => fragmentsFromManifest(noId), /without an id/);
});

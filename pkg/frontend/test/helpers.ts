import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { TraceDocument } from '../src/types.js';
import { validateTraceDocument } from '../src/validate.js';

const HERE = dirname(fileURLToPath(import.meta.url));
export const REPO_ROOT = join(HERE, '..', '..');
export const GOLDEN_DIR = join(REPO_ROOT, 'golden');
export const FIXTURE_DIR = join(HERE, '..', 'fixtures');

export const GOLDEN_NAMES = [
  'square-apply.trace.json',
  'if-branch.trace.json',
  'callcc-return.trace.json',
] as const;

export function readTrace(path: string): TraceDocument {
  return validateTraceDocument(JSON.parse(readFileSync(path, 'utf-8')));
}

export function readGolden(name: (typeof GOLDEN_NAMES)[number]): TraceDocument {
  return readTrace(join(GOLDEN_DIR, name));
}

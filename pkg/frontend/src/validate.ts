// Structural validation of incoming trace documents. A malformed document
// must fail loudly with a message the load-error banner can show.

import type { TraceDocument, StateSnapshot } from './types.js';

export class TraceFormatError extends Error {}

function fail(message: string): never {
  throw new TraceFormatError(message);
}

function isObject(x: unknown): x is Record<string, unknown> {
  return typeof x === 'object' && x !== null && !Array.isArray(x);
}

const RULE_NAMES = new Set([
  'Decompose n-ary procedure call',
  'Construct closure',
  'Decompose variable declaration',
  'Decompose variable assignment',
  'Decompose conditional expression',
  'Decompose expression sequence',
  'Decompose begin expression',
  'Evaluate primitive',
  'Lookup variable',
  'Apply operator or simple procedure',
  'Apply closure',
  'Apply callcc',
  'Apply continuation',
  'Restore environment',
  'Assign variable to value',
  'Branch to consequent',
  'Branch to alternative',
  'Remove unused value',
]);

function validateControlItem(item: unknown, where: string): void {
  if (!isObject(item)) fail(`${where}: control item is not an object`);
  if ('opcode' in item) {
    const opcode = item.opcode;
    if (!['ASGN', 'CALL', 'ENV', 'BRANCH', 'POP'].includes(opcode as string)) {
      fail(`${where}: unknown opcode ${String(opcode)}`);
    }
    if (!isObject(item.params)) fail(`${where}: instruction without params`);
    if (opcode === 'ENV' && typeof item.env_ref !== 'number') {
      fail(`${where}: ENV instruction without env_ref`);
    }
    return;
  }
  if (typeof item.source_text !== 'string') fail(`${where}: expression without source_text`);
  if (!isObject(item.span)) fail(`${where}: expression without span`);
  for (const key of ['start_offset', 'end_offset', 'start_line', 'start_col']) {
    if (typeof (item.span as Record<string, unknown>)[key] !== 'number') {
      fail(`${where}: span missing ${key}`);
    }
  }
}

function validateValue(value: unknown, where: string): void {
  if (!isObject(value)) fail(`${where}: value descriptor is not an object`);
  if (typeof value.kind !== 'string') fail(`${where}: value without kind`);
  if (typeof value.repr !== 'string') fail(`${where}: value without repr`);
  if (value.kind === 'pair' && typeof value.pair_ref !== 'number') {
    fail(`${where}: pair without pair_ref`);
  }
  if (value.kind === 'closure') {
    if (typeof value.closure_ref !== 'number') fail(`${where}: closure without closure_ref`);
    if (typeof value.env_ref !== 'number') fail(`${where}: closure without env_ref`);
    if (!Array.isArray(value.params)) fail(`${where}: closure without params`);
  }
  if (value.kind === 'continuation') {
    if (typeof value.env_ref !== 'number') fail(`${where}: continuation without env_ref`);
    if (!Array.isArray(value.control) || !Array.isArray(value.stash)) {
      fail(`${where}: continuation without captured control/stash`);
    }
    value.control.forEach((item, i) => validateControlItem(item, `${where}.control[${i}]`));
    value.stash.forEach((v, i) => validateValue(v, `${where}.stash[${i}]`));
  }
}

function validateState(state: unknown, index: number): void {
  const where = `states[${index}]`;
  if (!isObject(state)) fail(`${where}: not an object`);
  if (state.step_number !== index) fail(`${where}: step_number must be ${index}`);
  if (index === 0) {
    if (state.rule_applied !== null) fail(`${where}: state 0 must have rule_applied null`);
  } else if (typeof state.rule_applied !== 'string' || !RULE_NAMES.has(state.rule_applied)) {
    fail(`${where}: unknown rule_applied ${String(state.rule_applied)}`);
  }
  if (!Array.isArray(state.control)) fail(`${where}: control is not a list`);
  if (!Array.isArray(state.stash)) fail(`${where}: stash is not a list`);
  if (typeof state.current_env !== 'number') fail(`${where}: current_env missing`);
  if (!Array.isArray(state.frames) || state.frames.length === 0) {
    fail(`${where}: frames missing`);
  }
  if (!Array.isArray(state.pairs)) fail(`${where}: pairs missing`);
  if (typeof state.output_so_far !== 'string') fail(`${where}: output_so_far missing`);

  state.control.forEach((item, i) => validateControlItem(item, `${where}.control[${i}]`));
  state.stash.forEach((v, i) => validateValue(v, `${where}.stash[${i}]`));

  const frameIds = new Set<number>();
  for (const frame of state.frames) {
    if (!isObject(frame) || typeof frame.id !== 'number' || !isObject(frame.bindings)) {
      fail(`${where}: malformed frame`);
    }
    frameIds.add(frame.id);
    for (const [name, value] of Object.entries(frame.bindings)) {
      validateValue(value, `${where}.frame[${frame.id}].${name}`);
    }
  }
  if (!frameIds.has(state.current_env as number)) {
    fail(`${where}: current_env ${String(state.current_env)} is not a frame`);
  }
  for (const pair of state.pairs) {
    if (!isObject(pair) || typeof pair.id !== 'number') fail(`${where}: malformed pair`);
    validateValue(pair.car, `${where}.pair[${pair.id}].car`);
    validateValue(pair.cdr, `${where}.pair[${pair.id}].cdr`);
  }
}

export function validateTraceDocument(raw: unknown): TraceDocument {
  if (!isObject(raw)) fail('document is not an object');
  if (raw.version !== 1) fail(`unsupported format version ${String(raw.version)}`);
  if (typeof raw.source !== 'string') fail('missing source text');
  if (!isObject(raw.config)) fail('missing config');
  if (!Array.isArray(raw.states) || raw.states.length === 0) fail('missing states');
  if (!isObject(raw.outcome) || typeof raw.outcome.repr !== 'string'
      || !['value', 'error', 'step_limit'].includes(raw.outcome.kind as string)) {
    fail('missing outcome');
  }
  raw.states.forEach(validateState);
  return raw as unknown as TraceDocument;
}

export function snapshotAt(doc: TraceDocument, index: number): StateSnapshot {
  const snapshot = doc.states[index];
  if (snapshot === undefined) throw new TraceFormatError(`no state ${index}`);
  return snapshot;
}

// TraceDocument (format version 1): the JSON contract produced by
// `cse trace` and served by `cse serve`. Mirrors docs/trace.schema.json.

export interface Span {
  start_offset: number;
  end_offset: number;
  start_line: number;
  start_col: number;
  end_line: number;
  end_col: number;
}

export interface ExpressionItem {
  source_text: string;
  span: Span;
}

export interface InstructionItem {
  opcode: 'ASGN' | 'CALL' | 'ENV' | 'BRANCH' | 'POP';
  params: {
    name?: string;
    arity?: number;
    consequent?: ExpressionItem;
    alternative?: ExpressionItem;
  };
  env_ref?: number;
}

export type ControlItem = ExpressionItem | InstructionItem;

export type ValueKind =
  | 'number' | 'boolean' | 'string' | 'symbol' | 'nil' | 'pair'
  | 'primitive' | 'closure' | 'continuation' | 'unspecified';

export interface ValueDescriptor {
  kind: ValueKind;
  repr: string;
  pair_ref?: number;
  name?: string;
  closure_ref?: number;
  env_ref?: number;
  params?: string[];
  body_text?: string;
  control?: ControlItem[];
  stash?: ValueDescriptor[];
}

export interface FrameSnapshot {
  id: number;
  parent: number | null;
  bindings: Record<string, ValueDescriptor>;
}

export interface PairSnapshot {
  id: number;
  car: ValueDescriptor;
  cdr: ValueDescriptor;
}

export interface StateSnapshot {
  step_number: number;
  rule_applied: string | null;
  control: ControlItem[]; // topmost (next to execute) first
  stash: ValueDescriptor[]; // topmost first
  current_env: number;
  frames: FrameSnapshot[];
  pairs: PairSnapshot[];
  output_so_far: string;
}

export interface TraceDocument {
  version: 1;
  source: string;
  config: { step_limit: number; proper_tail_calls: boolean };
  states: StateSnapshot[];
  outcome: { kind: 'value' | 'error' | 'step_limit'; repr: string };
}

export function isInstruction(item: ControlItem): item is InstructionItem {
  return 'opcode' in item;
}

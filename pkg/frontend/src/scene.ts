// Scene construction: a pure function from one snapshot (plus view toggles)
// to a renderable graph of nodes and arrows. The DOM layer only draws what
// is here, so tests can assert on scenes without a browser.
//
// Sharing is preserved structurally: one frame node per frame id, one pair
// node per cell id, one closure node per closure_ref; every other occurrence
// of such a value is an arrow to the node.

import type {
  ControlItem,
  Span,
  StateSnapshot,
  ValueDescriptor,
} from './types.js';
import { isInstruction } from './types.js';
import type { SelectedItem } from './view.js';

export interface SceneValue {
  kind: string;
  label: string;
  refTarget?: string; // pair:N or closure:N this occurrence points at
  envTarget?: string; // frame:N captured by a continuation occurrence
  continuation?: { control: string[]; stash: string[] };
}

export interface ControlCell {
  id: string;
  kind: 'expression' | 'instruction';
  label: string;
  span?: Span;
  envTarget?: string; // ENV instructions point at the frame they restore
}

export interface StashCell {
  id: string;
  value: SceneValue;
}

export interface BindingCell {
  id: string;
  name: string;
  value: SceneValue;
}

export interface FrameBox {
  id: string;
  frameId: number;
  isCurrent: boolean;
  isGlobal: boolean;
  bindings: BindingCell[];
}

export interface ClosureNode {
  id: string;
  closureRef: number;
  label: string;
  params: string[];
  bodyText: string;
}

export interface PairNode {
  id: string;
  pairId: number;
  car: SceneValue;
  cdr: SceneValue;
}

export interface Arrow {
  from: string;
  to: string;
  kind: 'parent' | 'capture' | 'ref';
}

export interface Scene {
  stepNumber: number;
  ruleApplied: string | null;
  control: ControlCell[];
  stash: StashCell[];
  frames: FrameBox[];
  closures: ClosureNode[];
  pairs: PairNode[];
  arrows: Arrow[];
  outputText: string;
  highlightSpan: Span | null;
  nodeIds: Set<string>;
}

export function controlLabel(item: ControlItem): string {
  if (!isInstruction(item)) {
    return collapse(item.source_text);
  }
  switch (item.opcode) {
    case 'ASGN':
      return `ASGN ${item.params.name ?? ''}`;
    case 'CALL':
      return `CALL ${item.params.arity ?? 0}`;
    case 'ENV':
      return `ENV E${item.env_ref ?? 0}`;
    case 'BRANCH': {
      const consequent = collapse(item.params.consequent?.source_text ?? '');
      const alternative = collapse(item.params.alternative?.source_text ?? '');
      return `BRANCH ${consequent} ${alternative}`;
    }
    case 'POP':
      return 'POP';
  }
}

function collapse(text: string): string {
  return text.split(/\s+/).join(' ');
}

class SceneBuilder {
  arrows: Arrow[] = [];
  closures = new Map<number, ClosureNode>();
  nodeIds = new Set<string>();

  node(id: string): string {
    this.nodeIds.add(id);
    return id;
  }

  arrow(from: string, to: string, kind: Arrow['kind']): void {
    this.arrows.push({ from, to, kind });
  }

  value(descriptor: ValueDescriptor, occurrenceId: string): SceneValue {
    this.node(occurrenceId);
    const scene: SceneValue = { kind: descriptor.kind, label: descriptor.repr };
    if (descriptor.kind === 'pair' && descriptor.pair_ref !== undefined) {
      scene.refTarget = `pair:${descriptor.pair_ref}`;
      this.arrow(occurrenceId, scene.refTarget, 'ref');
    }
    if (descriptor.kind === 'closure' && descriptor.closure_ref !== undefined) {
      scene.refTarget = `closure:${descriptor.closure_ref}`;
      this.arrow(occurrenceId, scene.refTarget, 'ref');
      this.registerClosure(descriptor);
    }
    if (descriptor.kind === 'continuation' && descriptor.env_ref !== undefined) {
      scene.envTarget = `frame:${descriptor.env_ref}`;
      this.arrow(occurrenceId, scene.envTarget, 'capture');
      scene.continuation = {
        control: (descriptor.control ?? []).map(controlLabel),
        stash: (descriptor.stash ?? []).map((v) => this.embeddedLabel(v)),
      };
    }
    return scene;
  }

  // values inside a captured stash render textually, but closures and pairs
  // they mention still produce shared nodes and must be registered
  embeddedLabel(descriptor: ValueDescriptor): string {
    if (descriptor.kind === 'closure') {
      this.registerClosure(descriptor);
    }
    if (descriptor.kind === 'continuation') {
      for (const value of descriptor.stash ?? []) {
        this.embeddedLabel(value);
      }
    }
    return descriptor.repr;
  }

  registerClosure(descriptor: ValueDescriptor): void {
    const ref = descriptor.closure_ref;
    if (ref === undefined || this.closures.has(ref)) return;
    const id = this.node(`closure:${ref}`);
    this.closures.set(ref, {
      id,
      closureRef: ref,
      label: descriptor.repr,
      params: descriptor.params ?? [],
      bodyText: collapse(descriptor.body_text ?? ''),
    });
    if (descriptor.env_ref !== undefined) {
      this.arrow(id, `frame:${descriptor.env_ref}`, 'capture');
    }
  }
}

export function buildScene(
  snapshot: StateSnapshot,
  selected: SelectedItem | null = null,
): Scene {
  const builder = new SceneBuilder();

  // frame boxes first so arrows always have their targets rendered
  const frames: FrameBox[] = snapshot.frames.map((frame) => {
    const id = builder.node(`frame:${frame.id}`);
    const bindings = Object.entries(frame.bindings).map(([name, descriptor]) => ({
      id: builder.node(`binding:${frame.id}:${name}`),
      name,
      value: builder.value(descriptor, `binding:${frame.id}:${name}`),
    }));
    if (frame.parent !== null) {
      builder.arrow(id, `frame:${frame.parent}`, 'parent');
    }
    return {
      id,
      frameId: frame.id,
      isCurrent: frame.id === snapshot.current_env,
      isGlobal: frame.parent === null,
      bindings,
    };
  });

  const pairs: PairNode[] = snapshot.pairs.map((pair) => {
    const id = builder.node(`pair:${pair.id}`);
    return {
      id,
      pairId: pair.id,
      car: builder.value(pair.car, builder.node(`pair:${pair.id}:car`)),
      cdr: builder.value(pair.cdr, builder.node(`pair:${pair.id}:cdr`)),
    };
  });

  const control: ControlCell[] = snapshot.control.map((item, index) => {
    const id = builder.node(`control:${index}`);
    const cell: ControlCell = {
      id,
      kind: isInstruction(item) ? 'instruction' : 'expression',
      label: controlLabel(item),
    };
    if (!isInstruction(item)) {
      cell.span = item.span;
    } else if (item.opcode === 'ENV' && item.env_ref !== undefined) {
      cell.envTarget = `frame:${item.env_ref}`;
      builder.arrow(id, cell.envTarget, 'capture');
    }
    return cell;
  });

  const stash: StashCell[] = snapshot.stash.map((descriptor, index) => {
    const id = builder.node(`stash:${index}`);
    return { id, value: builder.value(descriptor, id) };
  });

  let highlightSpan: Span | null = null;
  if (selected !== null && selected.area === 'control') {
    const cell = control[selected.index];
    if (cell !== undefined && cell.span !== undefined) {
      highlightSpan = cell.span;
    }
  }

  return {
    stepNumber: snapshot.step_number,
    ruleApplied: snapshot.rule_applied,
    control,
    stash,
    frames,
    closures: [...builder.closures.values()],
    pairs,
    arrows: builder.arrows,
    outputText: snapshot.output_so_far,
    highlightSpan,
    nodeIds: builder.nodeIds,
  };
}

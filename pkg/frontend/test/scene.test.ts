import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { buildScene, controlLabel } from '../src/scene.js';
import { FIXTURE_DIR, GOLDEN_NAMES, readGolden, readTrace } from './helpers.js';

describe('golden traces render without error', () => {
  for (const name of GOLDEN_NAMES) {
    it(`${name}: control/stash lists match the snapshot lengths at every state`, () => {
      const trace = readGolden(name);
      for (const snapshot of trace.states) {
        const scene = buildScene(snapshot);
        expect(scene.control.length).toBe(snapshot.control.length);
        expect(scene.stash.length).toBe(snapshot.stash.length);
        expect(scene.frames.length).toBe(snapshot.frames.length);
        expect(scene.pairs.length).toBe(snapshot.pairs.length);
      }
    });
  }
});

describe('sharing fidelity', () => {
  it('two bindings to one closure render exactly one closure node', () => {
    const trace = readTrace(join(FIXTURE_DIR, 'closure-sharing.trace.json'));
    expect(trace.source).toBe('(define f (lambda (x) x)) (define g f)');
    const finalState = trace.states[trace.states.length - 1]!;
    const scene = buildScene(finalState);
    expect(scene.closures.length).toBe(1);
    const arrowsToClosure = scene.arrows.filter(
      (arrow) => arrow.to === scene.closures[0]!.id && arrow.kind === 'ref',
    );
    // three occurrences, one node: the f and g bindings, plus the final
    // stash value (define is value-producing)
    expect(new Set(arrowsToClosure.map((a) => a.from))).toEqual(
      new Set(['binding:0:f', 'binding:0:g', 'stash:0']),
    );
  });

  it('frames and pairs produce one node per id', () => {
    const trace = readGolden('square-apply.trace.json');
    for (const snapshot of trace.states) {
      const scene = buildScene(snapshot);
      expect(new Set(scene.frames.map((f) => f.id)).size).toBe(scene.frames.length);
      expect(new Set(scene.pairs.map((p) => p.id)).size).toBe(scene.pairs.length);
      expect(new Set(scene.closures.map((c) => c.id)).size).toBe(scene.closures.length);
    }
  });
});

describe('arrow integrity', () => {
  const fixtures = [
    ...GOLDEN_NAMES.map((name) => readGolden(name)),
    readTrace(join(FIXTURE_DIR, 'closure-sharing.trace.json')),
  ];
  it('every arrow endpoint is a rendered node, in every state', () => {
    for (const trace of fixtures) {
      for (const snapshot of trace.states) {
        const scene = buildScene(snapshot);
        for (const arrow of scene.arrows) {
          expect(scene.nodeIds.has(arrow.from), `${arrow.from} missing`).toBe(true);
          expect(scene.nodeIds.has(arrow.to), `${arrow.to} missing`).toBe(true);
        }
      }
    }
  });
});

describe('scene contents', () => {
  it('rendering is a pure function of the snapshot', () => {
    const trace = readGolden('if-branch.trace.json');
    const indices = [3, 6, 3];
    const scenes = indices.map((k) => buildScene(trace.states[k]!));
    expect(scenes[0]).toEqual(scenes[2]);
    expect(scenes[0]).not.toEqual(scenes[1]);
  });

  it('control labels render instructions as opcode badges', () => {
    const trace = readGolden('if-branch.trace.json');
    const labels = trace.states[2]!.control.map(controlLabel);
    expect(labels).toEqual(['=', '1', '2', 'CALL 2', 'BRANCH "1 == 2" "1 != 2"']);
  });

  it('the current frame is marked and parents chain to the global frame', () => {
    const trace = readGolden('square-apply.trace.json');
    const inBody = buildScene(trace.states[5]!); // body evaluating in E1
    const current = inBody.frames.find((f) => f.isCurrent)!;
    expect(current.frameId).toBe(1);
    expect(inBody.arrows).toContainEqual({ from: 'frame:1', to: 'frame:0', kind: 'parent' });
    // before application the closure sits on the stash and captures E0;
    // afterwards nothing references it and it disappears from the scene
    const beforeApply = buildScene(trace.states[3]!);
    const closure = beforeApply.closures[0]!;
    expect(beforeApply.arrows).toContainEqual({ from: closure.id, to: 'frame:0', kind: 'capture' });
    expect(inBody.closures.length).toBe(0);
  });

  it('selecting a control expression highlights its source span', () => {
    const trace = readGolden('square-apply.trace.json');
    const scene = buildScene(trace.states[1]!, { area: 'control', index: 0 });
    const span = scene.highlightSpan!;
    expect(trace.source.slice(span.start_offset, span.end_offset)).toBe('(lambda (x) (* x x))');
  });

  it('selecting an instruction highlights nothing', () => {
    const trace = readGolden('square-apply.trace.json');
    const scene = buildScene(trace.states[1]!, { area: 'control', index: 2 });
    expect(scene.highlightSpan).toBeNull();
  });

  it('continuations render a textual glyph with their captured components', () => {
    const trace = readGolden('callcc-return.trace.json');
    const afterCapture = trace.states.find((s) => s.rule_applied === 'Apply callcc')!;
    const scene = buildScene(afterCapture);
    const top = scene.stash[0]!.value;
    expect(top.kind).toBe('continuation');
    expect(top.continuation).toEqual({ control: [], stash: [] });
    expect(top.envTarget).toBe('frame:0');
    expect(scene.stash[1]!.value.kind).toBe('closure');
  });

  it('env-restore instructions point at the frame they restore', () => {
    const trace = readGolden('square-apply.trace.json');
    const scene = buildScene(trace.states[4]!);
    const envCell = scene.control.find((c) => c.label.startsWith('ENV'))!;
    expect(envCell.envTarget).toBe('frame:0');
  });

  it('output text is carried through', () => {
    const trace = readGolden('square-apply.trace.json');
    expect(buildScene(trace.states[10]!).outputText).toBe('');
  });
});

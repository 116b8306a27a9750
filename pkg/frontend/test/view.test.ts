import { describe, expect, it } from 'vitest';

import {
  createViewState,
  seek,
  seekEnd,
  seekStart,
  stepBackward,
  stepForward,
  toggleControlStash,
} from '../src/view.js';
import { TraceFormatError } from '../src/validate.js';
import { GOLDEN_NAMES, readGolden } from './helpers.js';

describe('loading', () => {
  it('loads every committed golden trace at state 0', () => {
    for (const name of GOLDEN_NAMES) {
      const view = createViewState(readGolden(name));
      expect(view.currentIndex).toBe(0);
      expect(view.trace.states.length).toBeGreaterThan(1);
      expect(view.showControlStash).toBe(true);
    }
  });

  it('the closure-application golden has the published 11 states', () => {
    const view = createViewState(readGolden('square-apply.trace.json'));
    expect(view.trace.states.length).toBe(11);
    expect(view.trace.outcome).toEqual({ kind: 'value', repr: '16' });
  });

  it('rejects malformed documents with a message, not a crash', () => {
    const bad = [
      42,
      {},
      { version: 2, source: '', config: {}, states: [], outcome: {} },
      { version: 1, source: '', config: {}, states: [], outcome: { kind: 'value', repr: '' } },
    ];
    for (const document of bad) {
      expect(() => createViewState(document)).toThrow(TraceFormatError);
    }
  });

  it('rejects a state with a broken control item', () => {
    const doc = JSON.parse(JSON.stringify(readGolden('if-branch.trace.json')));
    doc.states[1].control[0] = { nonsense: true };
    expect(() => createViewState(doc)).toThrow(/control item|source_text/);
  });
});

describe('stepping and seeking', () => {
  const view = createViewState(readGolden('square-apply.trace.json'));
  const last = view.trace.states.length - 1;

  it('seek clamps to the valid range', () => {
    expect(seek(view, -5).currentIndex).toBe(0);
    expect(seek(view, 4).currentIndex).toBe(4);
    expect(seek(view, 999).currentIndex).toBe(last);
  });

  it('step forward at the last state stays at the last state', () => {
    const atEnd = seekEnd(view);
    expect(stepForward(atEnd).currentIndex).toBe(last);
  });

  it('step backward at state 0 stays at 0', () => {
    expect(stepBackward(view).currentIndex).toBe(0);
  });

  it('home/end jump to the extremes', () => {
    const middle = seek(view, 5);
    expect(seekStart(middle).currentIndex).toBe(0);
    expect(seekEnd(middle).currentIndex).toBe(last);
  });

  it('ops are pure: the input view is untouched', () => {
    const before = view.currentIndex;
    stepForward(view);
    seek(view, 7);
    toggleControlStash(view);
    expect(view.currentIndex).toBe(before);
    expect(view.showControlStash).toBe(true);
  });

  it('toggling hides and restores the control/stash pane flag', () => {
    const hidden = toggleControlStash(view);
    expect(hidden.showControlStash).toBe(false);
    expect(toggleControlStash(hidden).showControlStash).toBe(true);
  });
});

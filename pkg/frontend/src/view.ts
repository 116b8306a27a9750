// View state: which snapshot is shown and which panes are visible.
// All ops are pure (they return a new ViewState) so re-rendering is
// a function of the returned value alone.

import type { TraceDocument } from './types.js';
import { validateTraceDocument } from './validate.js';

export interface SelectedItem {
  area: 'control' | 'stash';
  index: number;
}

export interface ViewState {
  trace: TraceDocument;
  currentIndex: number;
  showControlStash: boolean;
  selectedItem: SelectedItem | null;
}

export function createViewState(raw: unknown): ViewState {
  const trace = validateTraceDocument(raw);
  return { trace, currentIndex: 0, showControlStash: true, selectedItem: null };
}

function clamp(index: number, length: number): number {
  if (index < 0) return 0;
  if (index >= length) return length - 1;
  return index;
}

export function seek(view: ViewState, index: number): ViewState {
  const clamped = clamp(index, view.trace.states.length);
  if (clamped === view.currentIndex) return view;
  return { ...view, currentIndex: clamped, selectedItem: null };
}

export function stepForward(view: ViewState): ViewState {
  return seek(view, view.currentIndex + 1);
}

export function stepBackward(view: ViewState): ViewState {
  return seek(view, view.currentIndex - 1);
}

export function seekStart(view: ViewState): ViewState {
  return seek(view, 0);
}

export function seekEnd(view: ViewState): ViewState {
  return seek(view, view.trace.states.length - 1);
}

export function toggleControlStash(view: ViewState): ViewState {
  return { ...view, showControlStash: !view.showControlStash };
}

export function select(view: ViewState, item: SelectedItem | null): ViewState {
  return { ...view, selectedItem: item };
}

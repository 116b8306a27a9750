// DOM painter: draws a Scene into the page. Layout is column-based
// (source + control/stash on the left, environment diagram on the right)
// with an SVG overlay for sharing arrows between node elements.

import type { Scene, SceneValue } from './scene.js';
import type { Span } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderSource(container: HTMLElement, source: string, span: Span | null): void {
  container.textContent = '';
  if (span === null) {
    container.append(source);
    return;
  }
  container.append(source.slice(0, span.start_offset));
  const mark = el('mark', 'source-highlight', source.slice(span.start_offset, span.end_offset));
  container.append(mark);
  container.append(source.slice(span.end_offset));
}

function valueCell(value: SceneValue, nodeId: string): HTMLElement {
  const cell = el('span', `value value-${value.kind}`, value.label);
  cell.dataset.nodeId = nodeId;
  if (value.continuation) {
    cell.classList.add('continuation-glyph');
    const detail = el('span', 'continuation-detail');
    const controlText = value.continuation.control.join(' : ') || 'ε';
    const stashText = value.continuation.stash.join(' : ') || 'ε';
    detail.append(el('span', 'cont-line', `control: ${controlText}`));
    detail.append(el('span', 'cont-line', `stash: ${stashText}`));
    cell.append(detail);
  }
  return cell;
}

export interface RenderCallbacks {
  onSelectControl: (index: number) => void;
}

export function renderScene(
  root: HTMLElement,
  scene: Scene,
  source: string,
  showControlStash: boolean,
  callbacks: RenderCallbacks,
): void {
  const sourcePane = root.querySelector<HTMLElement>('#source-pane')!;
  renderSource(sourcePane, source, scene.highlightSpan);

  const status = root.querySelector<HTMLElement>('#status-line')!;
  status.textContent = scene.ruleApplied
    ? `state ${scene.stepNumber} — ${scene.ruleApplied}`
    : `state ${scene.stepNumber} — initial`;

  const machinePane = root.querySelector<HTMLElement>('#machine-pane')!;
  machinePane.style.display = showControlStash ? '' : 'none';

  const controlColumn = root.querySelector<HTMLElement>('#control-column')!;
  controlColumn.textContent = '';
  scene.control.forEach((cell, index) => {
    const div = el('div', `control-item control-${cell.kind}`, cell.label);
    div.dataset.nodeId = cell.id;
    div.addEventListener('click', () => callbacks.onSelectControl(index));
    controlColumn.append(div);
  });

  const stashRow = root.querySelector<HTMLElement>('#stash-row')!;
  stashRow.textContent = '';
  // stash is serialized top-first; draw bottom at the left, top at the right
  [...scene.stash].reverse().forEach((cell) => {
    const div = el('div', 'stash-item');
    div.append(valueCell(cell.value, cell.id));
    stashRow.append(div);
  });

  const framesColumn = root.querySelector<HTMLElement>('#frames-column')!;
  framesColumn.textContent = '';
  for (const frame of scene.frames) {
    const box = el('div', 'frame-box' + (frame.isCurrent ? ' frame-current' : ''));
    box.dataset.nodeId = frame.id;
    const title = frame.isGlobal ? `E${frame.frameId} (global)` : `E${frame.frameId}`;
    box.append(el('div', 'frame-title', title));
    const list = el('div', 'frame-bindings');
    for (const binding of frame.bindings) {
      if (frame.isGlobal && binding.value.kind === 'primitive') continue; // keep the diagram desk-sized
      const row = el('div', 'binding-row');
      row.append(el('span', 'binding-name', binding.name));
      row.append(valueCell(binding.value, binding.id));
      list.append(row);
    }
    if (frame.isGlobal) {
      list.append(el('div', 'binding-row binding-elided',
        `… ${frame.bindings.length} bindings (primitives hidden)`));
    }
    box.append(list);
    framesColumn.append(box);
  }

  const heapColumn = root.querySelector<HTMLElement>('#heap-column')!;
  heapColumn.textContent = '';
  for (const closure of scene.closures) {
    const node = el('div', 'closure-node');
    node.dataset.nodeId = closure.id;
    node.append(el('div', 'closure-title', closure.label));
    node.append(el('div', 'closure-body', `(${closure.params.join(' ')}) ↦ ${closure.bodyText}`));
    heapColumn.append(node);
  }
  for (const pair of scene.pairs) {
    const node = el('div', 'pair-node');
    node.dataset.nodeId = pair.id;
    const carCell = el('div', 'pair-cell');
    carCell.dataset.nodeId = `${pair.id}:car`;
    carCell.append(valueCell(pair.car, `${pair.id}:car`));
    const cdrCell = el('div', 'pair-cell');
    cdrCell.dataset.nodeId = `${pair.id}:cdr`;
    cdrCell.append(valueCell(pair.cdr, `${pair.id}:cdr`));
    node.append(el('div', 'pair-title', `p${pair.pairId}`), carCell, cdrCell);
    heapColumn.append(node);
  }

  const output = root.querySelector<HTMLElement>('#output-pane')!;
  output.textContent = scene.outputText;

  drawArrows(root, scene);
}

function drawArrows(root: HTMLElement, scene: Scene): void {
  const svg = root.querySelector<SVGSVGElement>('#arrow-overlay')!;
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const rootBox = root.getBoundingClientRect();
  const locate = (nodeId: string): { x: number; y: number } | null => {
    const target = root.querySelector<HTMLElement>(`[data-node-id="${nodeId}"]`);
    if (!target || target.offsetParent === null) return null;
    const box = target.getBoundingClientRect();
    return { x: box.left - rootBox.left + box.width / 2, y: box.top - rootBox.top + box.height / 2 };
  };
  for (const arrow of scene.arrows) {
    const from = locate(arrow.from);
    const to = locate(arrow.to);
    if (!from || !to) continue; // endpoint hidden (e.g. elided primitive binding)
    const line = document.createElementNS('http://www.w3.org/2000/svg', 'line');
    line.setAttribute('x1', String(from.x));
    line.setAttribute('y1', String(from.y));
    line.setAttribute('x2', String(to.x));
    line.setAttribute('y2', String(to.y));
    line.setAttribute('class', `arrow arrow-${arrow.kind}`);
    line.setAttribute('marker-end', 'url(#arrowhead)');
    svg.append(line);
  }
}

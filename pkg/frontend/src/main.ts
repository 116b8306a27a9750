// App bootstrap: trace loading (file drop, file picker, or HTTP GET from
// `cse serve`), the state slider, step buttons, and keyboard bindings.

import { buildScene } from './scene.js';
import { renderScene } from './render.js';
import {
  createViewState,
  seek,
  seekEnd,
  seekStart,
  select,
  stepBackward,
  stepForward,
  toggleControlStash,
  ViewState,
} from './view.js';
import { snapshotAt } from './validate.js';

let view: ViewState | null = null;

function root(): HTMLElement {
  return document.getElementById('app')!;
}

function showError(message: string): void {
  const banner = document.getElementById('error-banner')!;
  banner.textContent = message;
  banner.style.display = 'block';
}

function clearError(): void {
  document.getElementById('error-banner')!.style.display = 'none';
}

function update(next: ViewState): void {
  view = next;
  const snapshot = snapshotAt(next.trace, next.currentIndex);
  const scene = buildScene(snapshot, next.selectedItem);
  renderScene(root(), scene, next.trace.source, next.showControlStash, {
    onSelectControl: (index) => update(select(view!, { area: 'control', index })),
  });
  const slider = document.getElementById('state-slider') as HTMLInputElement;
  slider.max = String(next.trace.states.length - 1);
  slider.value = String(next.currentIndex);
  document.getElementById('slider-label')!.textContent =
    `${next.currentIndex} / ${next.trace.states.length - 1}`;
  const outcome = next.trace.outcome;
  document.getElementById('outcome-line')!.textContent =
    `outcome: ${outcome.kind} ${outcome.repr}`;
}

function loadRaw(raw: unknown): void {
  try {
    clearError();
    update(createViewState(raw));
  } catch (error) {
    showError(`could not load trace: ${error instanceof Error ? error.message : String(error)}`);
  }
}

async function loadFromUrl(url: string): Promise<void> {
  try {
    clearError();
    const response = await fetch(url);
    if (!response.ok) {
      throw new Error(`GET ${url} -> ${response.status}`);
    }
    loadRaw(await response.json());
  } catch (error) {
    showError(`could not fetch trace: ${error instanceof Error ? error.message : String(error)}`);
  }
}

function loadFromFile(file: File): void {
  const fileReader = new FileReader();
  fileReader.onload = () => {
    try {
      loadRaw(JSON.parse(String(fileReader.result)));
    } catch (error) {
      showError(`not a JSON trace: ${error instanceof Error ? error.message : String(error)}`);
    }
  };
  fileReader.readAsText(file);
}

function wire(): void {
  const filePicker = document.getElementById('file-picker') as HTMLInputElement;
  filePicker.addEventListener('change', () => {
    if (filePicker.files && filePicker.files[0]) loadFromFile(filePicker.files[0]);
  });

  document.body.addEventListener('dragover', (event) => event.preventDefault());
  document.body.addEventListener('drop', (event) => {
    event.preventDefault();
    const file = event.dataTransfer?.files[0];
    if (file) loadFromFile(file);
  });

  const urlInput = document.getElementById('trace-url') as HTMLInputElement;
  document.getElementById('fetch-button')!.addEventListener('click', () => {
    void loadFromUrl(urlInput.value);
  });

  const slider = document.getElementById('state-slider') as HTMLInputElement;
  slider.addEventListener('input', () => {
    if (view) update(seek(view, Number(slider.value)));
  });

  const bind = (id: string, fn: (v: ViewState) => ViewState) => {
    document.getElementById(id)!.addEventListener('click', () => {
      if (view) update(fn(view));
    });
  };
  bind('step-back', stepBackward);
  bind('step-forward', stepForward);
  bind('seek-start', seekStart);
  bind('seek-end', seekEnd);
  bind('toggle-machine', toggleControlStash);

  document.addEventListener('keydown', (event) => {
    if (!view || event.target instanceof HTMLInputElement) return;
    const actions: Record<string, (v: ViewState) => ViewState> = {
      ArrowLeft: stepBackward,
      ArrowRight: stepForward,
      Home: seekStart,
      End: seekEnd,
    };
    const action = actions[event.key];
    if (action) {
      event.preventDefault();
      update(action(view));
    }
  });

  window.addEventListener('resize', () => {
    if (view) update(view);
  });

  const params = new URLSearchParams(window.location.search);
  const traceUrl = params.get('trace');
  if (traceUrl) {
    urlInput.value = traceUrl;
    void loadFromUrl(traceUrl);
  }
}

wire();

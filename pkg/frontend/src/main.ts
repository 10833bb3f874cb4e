import { ApiError, PlayClient } from './api';
import { BoardRenderer } from './render';
import { BoardViewModel, MoveStager } from './viewmodel';
import { SessionView } from './types';

const client = new PlayClient('');

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

let vm: BoardViewModel | null = null;
let stager: MoveStager | null = null;
let renderer: BoardRenderer | null = null;
let sessionId: string | null = null;
let busy = false;

function banner(msg: string, error = false) {
  const b = el<HTMLDivElement>('banner');
  b.textContent = msg;
  b.className = error ? 'banner error' : 'banner';
}

function status(view: SessionView) {
  el<HTMLSpanElement>('round').textContent = `round ${view.round}/${view.max_rounds}`;
  el<HTMLSpanElement>('mode').textContent = vm ? vm.modeBadge() : '';
  el<HTMLSpanElement>('admissible').textContent = view.admissible
    ? 'admissible'
    : 'demo arena (not admissible)';
  const done = view.outcome !== undefined;
  el<HTMLButtonElement>('submit').disabled = done || view.phase !== 'cop_turn';
  el<HTMLAnchorElement>('trace').style.display = done ? 'inline' : 'none';
}

function applyView(view: SessionView) {
  if (!vm || !stager || !renderer) return;
  vm.apply(view);
  stager.clear();
  status(view);
  renderer.draw();
  if (view.outcome === 'cops_win') {
    banner(`capture at vertex ${view.capture_vertex} in round ${view.round}`);
  } else if (view.outcome === 'robber_survived') {
    banner(`robber survived ${view.max_rounds} rounds`);
  }
}

async function onVertexClick(v: number) {
  if (!vm || !stager || !renderer || !vm.view) return;
  if (vm.view.phase === 'cop_placement') {
    // placement: click k vertices in order
    placement.push(v);
    banner(`placing cops: ${placement.join(', ')}`);
    if (placement.length === vm.view.k) await submitPositions(placement.splice(0));
    return;
  }
  if (vm.view.phase !== 'cop_turn') return;
  // click a cop to select it, then a highlighted target to stage the move
  const copIndex = vm.view.cops.indexOf(v);
  if (stager.selected === null && copIndex >= 0) {
    stager.select(copIndex);
  } else if (stager.selected !== null) {
    if (!stager.stage(v)) stager.select(stager.selected); // deselect on miss
  }
  renderer.draw();
}

const placement: number[] = [];

async function submitPositions(positions: number[]) {
  if (!sessionId || busy) return;
  busy = true;
  try {
    applyView(await client.postCops(sessionId, positions));
  } catch (e) {
    if (e instanceof ApiError) banner(e.detail, true);
    else banner(String(e), true);
  } finally {
    busy = false;
  }
}

async function newGame() {
  const k = Number(el<HTMLInputElement>('k').value) || 3;
  const robber = el<HTMLSelectElement>('robber').value;
  const seed = Number(el<HTMLInputElement>('seed').value) || 0;
  try {
    const view = await client.createSession({ k, robber, seed });
    sessionId = view.id;
    const arena = await client.getArena(view.arena);
    vm = new BoardViewModel(arena);
    stager = new MoveStager(vm);
    const canvas = el<HTMLCanvasElement>('board');
    renderer = new BoardRenderer(canvas, vm, stager, onVertexClick);
    placement.length = 0;
    applyView(view);
    banner(`new session ${view.id}: click ${k} vertices to place the cops`);
    el<HTMLAnchorElement>('trace').onclick = async (e) => {
      e.preventDefault();
      if (!sessionId) return;
      const text = await client.getTrace(sessionId);
      const blob = new Blob([text], { type: 'application/jsonl' });
      const a = document.createElement('a');
      a.href = URL.createObjectURL(blob);
      a.download = `${sessionId}.jsonl`;
      a.click();
    };
  } catch (e) {
    if (e instanceof ApiError) banner(e.detail, true);
    else banner(String(e), true);
  }
}

export function boot() {
  el<HTMLButtonElement>('new-game').onclick = () => void newGame();
  el<HTMLButtonElement>('submit').onclick = () => {
    if (stager) void submitPositions(stager.positions());
  };
  void newGame();
}

if (typeof document !== 'undefined' && document.getElementById('board')) {
  boot();
}

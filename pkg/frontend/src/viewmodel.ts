import { ArenaDoc, SessionView } from './types';

export type ArcStyle = 'green' | 'spoke' | 'chain' | 'other';

export interface StyledArc {
  from: [number, number];
  to: [number, number];
  style: ArcStyle;
}

export interface GreenPolyline {
  // sampled drawing points: exit corner, every TICK_EVERY-th interior
  // vertex, entry corner
  points: [number, number][];
  // subset of points that get a tick mark (the sampled interiors)
  ticks: [number, number][];
  src: number;
  dst: number;
}

export interface CopToken {
  index: number;
  vertex: number;
  at: [number, number];
  // set while the cop rides a green path: 0..1 toward the destination unit
  transit?: { src: number; dst: number; progress: number };
}

export const TICK_EVERY = 10;

/** Everything the canvas needs, derived purely from server documents.
 * The client never computes legality itself: highlights come verbatim
 * from the view's legal-move lists. */
export class BoardViewModel {
  readonly arena: ArenaDoc;
  readonly arcs: StyledArc[];
  readonly greenPolylines: GreenPolyline[];
  /** vertices worth drawing individually (green interiors are compressed
   * into polylines instead) */
  readonly drawnVertices: number[];

  view: SessionView | null = null;

  constructor(arena: ArenaDoc) {
    this.arena = arena;
    const greenInterior = new Set<number>();
    for (const gp of arena.green_paths) {
      for (const v of gp.interior) greenInterior.add(v);
    }

    this.arcs = [];
    for (const [t, h] of arena.arcs) {
      if (greenInterior.has(t) || greenInterior.has(h)) continue;
      this.arcs.push({
        from: arena.layout[t],
        to: arena.layout[h],
        style: this.styleOf(t, h),
      });
    }

    this.greenPolylines = arena.green_paths.map((gp) => {
      const points: [number, number][] = [arena.layout[gp.exit_corner]];
      const ticks: [number, number][] = [];
      for (let i = TICK_EVERY - 1; i < gp.interior.length; i += TICK_EVERY) {
        const p = arena.layout[gp.interior[i]];
        points.push(p);
        ticks.push(p);
      }
      points.push(arena.layout[gp.entry_corner]);
      return { points, ticks, src: gp.src, dst: gp.dst };
    });

    this.drawnVertices = [];
    for (let v = 0; v < arena.n; v++) {
      if (!greenInterior.has(v)) this.drawnVertices.push(v);
    }
  }

  private styleOf(t: number, h: number): ArcStyle {
    const kinds = [this.arena.roles[t][0], this.arena.roles[h][0]];
    if (kinds.includes('green')) return 'green';
    if (kinds.includes('spoke') || kinds.includes('center')) return 'spoke';
    if (kinds.includes('chain')) return 'chain';
    return 'other'; // corner-corner, does not occur in practice
  }

  apply(view: SessionView) {
    this.view = view;
  }

  copTokens(): CopToken[] {
    if (!this.view) return [];
    return this.view.cops.map((v, index) => {
      const token: CopToken = { index, vertex: v, at: this.arena.layout[v] };
      const role = this.arena.roles[v];
      if (role[0] === 'green') {
        const [, src, dst, pos] = role;
        token.transit = { src, dst, progress: pos / this.arena.params.green };
      }
      return token;
    });
  }

  robberAt(): [number, number] | null {
    if (!this.view || this.view.robber === null) return null;
    return this.arena.layout[this.view.robber];
  }

  /** legal targets for one cop, straight from the server document */
  legalFor(copIndex: number): number[] {
    if (!this.view || !this.view.legal) return [];
    return this.view.legal[copIndex] ?? [];
  }

  modeBadge(): string {
    if (!this.view) return '';
    if (this.view.outcome) return this.view.outcome;
    return this.view.annotation ? this.view.annotation.mode : this.view.phase;
  }
}

/** Collects one cop move per cop before submitting the half-round as a
 * single positions array; unstaged cops hold their vertex. */
export class MoveStager {
  private staged = new Map<number, number>();
  selected: number | null = null;

  constructor(private vm: BoardViewModel) {}

  select(copIndex: number) {
    this.selected = this.selected === copIndex ? null : copIndex;
  }

  /** returns true if the target was accepted for the selected cop */
  stage(target: number): boolean {
    if (this.selected === null) return false;
    if (!this.vm.legalFor(this.selected).includes(target)) return false;
    this.staged.set(this.selected, target);
    this.selected = null;
    return true;
  }

  stagedFor(copIndex: number): number | undefined {
    return this.staged.get(copIndex);
  }

  /** full positions array for POST: staged moves where given, current
   * positions for everyone else */
  positions(): number[] {
    const view = this.vm.view;
    if (!view) return [];
    return view.cops.map((v, i) => this.staged.get(i) ?? v);
  }

  clear() {
    this.staged.clear();
    this.selected = null;
  }
}

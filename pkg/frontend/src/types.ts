// Documents served by the play service. All are schema-versioned with `v`.

export type Phase =
  | 'cop_placement'
  | 'robber_placement'
  | 'cop_turn'
  | 'robber_turn'
  | 'cops_win'
  | 'robber_survived';

// roles come over the wire as [kind, ...fields], see RoleDoc below
export type RoleDoc =
  | ['center', number]
  | ['spoke', number, number, number, boolean]
  | ['corner', number, number, 'exit' | 'entry']
  | ['chain', number, number, 'f' | 'b', number]
  | ['green', number, number, number, number];

export interface UnitDoc {
  center: number;
  corners: number[];
  corner_kinds: string[];
  exits: number[][];
}

export interface GreenPathDoc {
  src: number;
  dst: number;
  exit_corner: number;
  entry_corner: number;
  interior: number[];
}

export interface ArenaDoc {
  v: number;
  id: string;
  params: { green: number; spoke: number; chain: number };
  admissible: boolean;
  n: number;
  arcs: [number, number][];
  roles: RoleDoc[];
  layout: [number, number][];
  units: UnitDoc[];
  green_paths: GreenPathDoc[];
}

export interface EvaderAnnotation {
  mode: string;
  case: string | null;
  target: number | null;
}

export interface SessionView {
  v: number;
  id: string;
  arena: string;
  admissible: boolean;
  k: number;
  max_rounds: number;
  seed: number;
  phase: Phase;
  round: number;
  cops: number[];
  robber: number | null;
  robber_kind: string;
  updated: number;
  legal?: number[][];
  annotation?: EvaderAnnotation;
  outcome?: 'cops_win' | 'robber_survived';
  capture_vertex?: number | null;
  trace_url?: string;
}

export interface SessionCreate {
  k?: number;
  robber?: string;
  seed?: number;
  max_rounds?: number;
  green?: number;
  spoke?: number;
  chain?: number;
}

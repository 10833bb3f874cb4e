import { ArenaDoc, RoleDoc, SessionView } from '../src/types';

/** A hand-rolled two-unit arena: center -> spoke -> exit corner, a green
 * path of G arcs to the other unit's entry corner, and a stub chain. */
export function makeArena(G: number): ArenaDoc {
  const roles: RoleDoc[] = [];
  const layout: [number, number][] = [];
  const arcs: [number, number][] = [];
  let n = 0;
  const add = (role: RoleDoc, x: number, y: number) => {
    roles.push(role);
    layout.push([x, y]);
    return n++;
  };

  const center0 = add(['center', 0], 0, 0);
  const spoke0 = add(['spoke', 0, 0, 1, false], 1, 0);
  const exitCorner = add(['corner', 0, 0, 'exit'], 2, 0);
  const chain0 = add(['chain', 0, 0, 'f', 1], 2, 1);
  arcs.push([center0, spoke0], [spoke0, exitCorner], [exitCorner, chain0]);

  const interior: number[] = [];
  for (let i = 1; i < G; i++) {
    interior.push(add(['green', 0, 1, i, 0], 2 + i, 0));
  }
  const entryCorner = add(['corner', 1, 0, 'entry'], 2 + G, 0);
  const spoke1 = add(['spoke', 1, 0, 1, true], 3 + G, 0);
  const center1 = add(['center', 1], 4 + G, 0);
  let prev = exitCorner;
  for (const v of interior) {
    arcs.push([prev, v]);
    prev = v;
  }
  arcs.push([prev, entryCorner], [entryCorner, spoke1], [spoke1, center1]);

  return {
    v: 1,
    id: `g${G}s1c2`,
    params: { green: G, spoke: 1, chain: 2 },
    admissible: false,
    n,
    arcs,
    roles,
    layout,
    units: [
      {
        center: center0,
        corners: [exitCorner],
        corner_kinds: ['exit'],
        exits: [[0, 1, 0]],
      },
      { center: center1, corners: [entryCorner], corner_kinds: ['entry'], exits: [] },
    ],
    green_paths: [
      { src: 0, dst: 1, exit_corner: exitCorner, entry_corner: entryCorner, interior },
    ],
  };
}

export function makeView(partial: Partial<SessionView>): SessionView {
  return {
    v: 1,
    id: 's1',
    arena: 'g25s1c2',
    admissible: false,
    k: 2,
    max_rounds: 100,
    seed: 0,
    phase: 'cop_turn',
    round: 1,
    cops: [0, 1],
    robber: 5,
    robber_kind: 'Evader',
    updated: 0,
    ...partial,
  };
}

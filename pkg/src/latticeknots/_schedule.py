"""Contraction schedule for the Temperley-Lieb sweep over a lattice diagram.

Crossings are absorbed in row-major order. Before step ``i`` the processed
part of every smoothing is a set of arcs pairing up the dangling edges
(edges with exactly one processed endpoint) plus closed loops. Which pairing
results, and how many loops close, depends only on the geometric smoothing
chosen at each crossing, never on the resolution. So the transitions are
tabulated once per lattice and the resolution only decides whether a
transition is weighted ``A`` or ``A^-1``.

Geometric smoothings at a crossing (ports E, N, W, S):

* ``0`` joins N-W and E-S,
* ``1`` joins N-E and S-W.

Smoothing ``0`` is the ``A`` smoothing when the horizontal strand is over.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import E, N, S, W, LatticeDiagram, build_diagram

SMOOTHING_PAIRS = (((N, W), (E, S)), ((N, E), (S, W)))


@dataclass(frozen=True)
class Schedule:
    n: int
    crossing_count: int
    state_counts: np.ndarray   # int32[c+1], number of boundary pairings before each step
    trans_base: np.ndarray     # int32[c], offset of step i in the transition tables
    trans_out: np.ndarray      # int32[...], target state of (step, state, smoothing)
    trans_loops: np.ndarray    # int8[...], loops closed by that transition
    plus_signs: np.ndarray     # int8[c], crossing sign when resolved '+'
    max_states: int
    width: int                 # dense coefficient buffer width
    offset: int                # index of A^0 in the buffer
    guard: int | None = None   # compiled-kernel overflow guard override (tests)

    def transitions(self, step: int, state: int, smoothing: int) -> tuple[int, int]:
        k = self.trans_base[step] + 2 * state + smoothing
        return int(self.trans_out[k]), int(self.trans_loops[k])


class _UF:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _step(state: tuple, x: int, ports: tuple, ends: list, smoothing: int):
    """Absorb crossing ``x`` into ``state`` (sorted tuple of edge pairs)."""
    uf = _UF()
    nodes = []
    partner_edges = {e for pair in state for e in pair}
    for u, v in state:
        uf.union(("P", u), ("P", v))
        nodes += [("P", u), ("P", v)]
    open_nodes = {("P", u) for u in partner_edges}
    seen_self = {}
    for p, e in enumerate(ports):
        node = ("X", p)
        nodes.append(node)
        if e in partner_edges:
            uf.union(("P", e), node)
            open_nodes.discard(("P", e))
        elif ends[e][0] == ends[e][1] == x:
            if e in seen_self:
                uf.union(seen_self[e], node)
            else:
                seen_self[e] = node
        else:
            open_nodes.add(node)
    for p, q in SMOOTHING_PAIRS[smoothing]:
        uf.union(("X", p), ("X", q))
    comps: dict = {}
    for node in nodes:
        comps.setdefault(uf.find(node), []).append(node)
    loops = 0
    pairs = []
    for members in comps.values():
        opens = sorted({m for m in members if m in open_nodes})
        if not opens:
            loops += 1
        elif len(opens) == 2:
            labels = sorted(m[1] if m[0] == "P" else ports[m[1]] for m in opens)
            pairs.append(tuple(labels))
        else:
            raise AssertionError("path component without two open ends")
    return tuple(sorted(pairs)), loops


@lru_cache(maxsize=None)
def build_schedule(n: int) -> Schedule:
    d: LatticeDiagram = build_diagram(n)
    c = d.crossing_count
    ends = d.edge_ends()
    states = [()]
    counts = [1]
    bases, outs, loops_all = [], [], []
    for x in range(c):
        index: dict = {}
        nxt = []
        bases.append(len(outs))
        for st in states:
            for g in (0, 1):
                new, loops = _step(st, x, d.port_edge[x], ends, g)
                if new not in index:
                    index[new] = len(nxt)
                    nxt.append(new)
                outs.append(index[new])
                loops_all.append(loops)
        states = nxt
        counts.append(len(states))
    if states != [()]:
        raise AssertionError("sweep did not close every arc")
    offset = 4 * ((3 * c + 9) // 4)
    return Schedule(
        n=n,
        crossing_count=c,
        state_counts=np.asarray(counts, dtype=np.int32),
        trans_base=np.asarray(bases, dtype=np.int32),
        trans_out=np.asarray(outs, dtype=np.int32),
        trans_loops=np.asarray(loops_all, dtype=np.int8),
        plus_signs=np.asarray(d.plus_signs, dtype=np.int8),
        max_states=max(counts),
        width=2 * offset + 4,
        offset=offset,
    )

"""Kauffman bracket and reduced Jones polynomial of resolved lattice diagrams.

Three engines compute the same bracket:

* ``statesum``: the textbook sum over all ``2**c`` smoothings, optionally
  reading loop counts from a precomputed :class:`SmoothingCube`;
* ``sweep``: planar contraction over a fixed crossing order, keeping one
  polynomial per noncrossing pairing of the cut edges (the fast engine);
* ``pd``: a state sum driven only by the PD code, for cross-checking the
  geometry.

Smoothings are geometric and resolution independent: bit 0 at a crossing
joins N-W and E-S, bit 1 joins N-E and S-W. Relative to a resolution, the
smoothing that agrees with the crossing's resolution bit is the ``A``
smoothing; the other one is the ``B`` smoothing.

The Jones polynomial is ``(-A)**(-3w) <D>`` rewritten with ``q = A**-2``,
so the right-handed trefoil reads ``q^2 + q^6 - q^8``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _backend
from ._schedule import SMOOTHING_PAIRS, build_schedule
from .lattice import LatticeDiagram, PlanarDiagram, Resolution, writhe
from .laurent import LaurentPoly

__all__ = [
    "Engine", "Smoothing", "SmoothingCube", "smoothing_components",
    "precompute_cube", "bracket_statesum", "bracket_sweep", "bracket_pd",
    "jones", "batch_jones", "bracket_to_jones", "LOOP_VALUE",
]

# value of one extra closed loop, -A^2 - A^-2
LOOP_VALUE = LaurentPoly(-2, (-1, 0, 0, 0, -1))

STATESUM_LIMIT = 20
CUBE_LIMIT = 25


class Engine(str, enum.Enum):
    SWEEP = "sweep"
    STATESUM = "statesum"
    PD = "pd"


@dataclass(frozen=True)
class Smoothing:
    """One geometric smoothing choice per crossing, as a bitmask."""

    crossing_count: int
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.crossing_count):
            raise ValueError("smoothing mask does not fit the crossing count")

    def bit(self, i: int) -> int:
        return (self.mask >> i) & 1

    def b_count(self, r: Resolution) -> int:
        """Number of ``B`` smoothings relative to ``r``."""
        return bin(self.mask ^ r.code).count("1")


class SmoothingCube:
    """Loop count of every smoothing of one diagram, indexed by mask."""

    def __init__(self, d: LatticeDiagram, loops: np.ndarray):
        if loops.shape != (1 << d.crossing_count,):
            raise ValueError("cube size does not match the diagram")
        self.diagram = d
        self.loops = loops
        self.loops.setflags(write=False)

    def __len__(self) -> int:
        return len(self.loops)

    def __getitem__(self, s: Smoothing | int) -> int:
        mask = s.mask if isinstance(s, Smoothing) else s
        return int(self.loops[mask])


def _check(d: LatticeDiagram, r: Resolution) -> None:
    if r.n != d.n:
        raise ValueError(f"resolution is for n={r.n}, diagram has n={d.n}")


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def smoothing_components(d: LatticeDiagram, s: Smoothing) -> int:
    """Closed loops left after smoothing every crossing (union-find on ports)."""
    if s.crossing_count != d.crossing_count:
        raise ValueError(
            f"smoothing has {s.crossing_count} crossings, diagram has {d.crossing_count}")
    c = d.crossing_count
    parent = list(range(4 * c))

    def union(a: int, b: int) -> None:
        ra, rb = _find(parent, a), _find(parent, b)
        if ra != rb:
            parent[ra] = rb

    # ports sharing an edge
    first: dict[int, int] = {}
    for i, ports in enumerate(d.port_edge):
        for p, e in enumerate(ports):
            if e in first:
                union(first[e], 4 * i + p)
            else:
                first[e] = 4 * i + p
    for i in range(c):
        for p, q in SMOOTHING_PAIRS[s.bit(i)]:
            union(4 * i + p, 4 * i + q)
    return len({_find(parent, x) for x in range(4 * c)})


def _edge_ports(d: LatticeDiagram) -> tuple[np.ndarray, np.ndarray]:
    port_edge = np.asarray(d.port_edge, dtype=np.int32)
    m = len(d.trace)
    edge_ports = np.full((m, 2), -1, dtype=np.int32)
    for i, ports in enumerate(d.port_edge):
        for p, e in enumerate(ports):
            slot = 0 if edge_ports[e, 0] == -1 else 1
            edge_ports[e, slot] = 4 * i + p
    return port_edge, edge_ports


def precompute_cube(d: LatticeDiagram, limit: int = CUBE_LIMIT) -> SmoothingCube:
    """Loop counts for all ``2**c`` smoothings, shared by every resolution of ``d``."""
    c = d.crossing_count
    if c > limit:
        raise ValueError(f"{c} crossings exceed the cube limit of {limit}")
    port_edge, edge_ports = _edge_ports(d)
    loops = _backend.kernel.smoothing_cube(port_edge, edge_ports, c)
    return SmoothingCube(d, np.asarray(loops, dtype=np.uint8))


def _loop_powers(count: int) -> list[LaurentPoly]:
    out = [LaurentPoly.one()]
    for _ in range(count):
        out.append(out[-1] * LOOP_VALUE)
    return out


def _bracket_from_hist(h: np.ndarray, c: int) -> LaurentPoly:
    # h[j, k]: smoothings with j B-choices and k loops
    powers = _loop_powers(h.shape[1])
    total = LaurentPoly.zero()
    for j, k in zip(*np.nonzero(h)):
        total = total + (powers[k - 1] * int(h[j, k])).shift(c - 2 * int(j))
    return total


def bracket_statesum(d: LatticeDiagram, r: Resolution,
                     cube: SmoothingCube | None = None) -> LaurentPoly:
    """Bracket as an explicit sum over smoothings.

    Without a cube every smoothing is traced with :func:`smoothing_components`,
    which is only practical for small diagrams.
    """
    _check(d, r)
    c = d.crossing_count
    if cube is None:
        if c > STATESUM_LIMIT:
            raise ValueError(f"{c} crossings exceed the state-sum limit of {STATESUM_LIMIT}")
        h = np.zeros((c + 1, c + 2), dtype=np.int64)
        code = r.code
        for mask in range(1 << c):
            k = smoothing_components(d, Smoothing(c, mask))
            h[bin(mask ^ code).count("1"), k] += 1
    else:
        if cube.diagram.n != d.n:
            raise ValueError("cube was built for a different diagram")
        h = np.asarray(_backend.kernel.statesum_hist(cube.loops, r.code, c))
    return _bracket_from_hist(h, c)


def bracket_sweep(d: LatticeDiagram, r: Resolution) -> LaurentPoly:
    """Bracket by planar contraction; exact even when int64 would overflow."""
    _check(d, r)
    sched = build_schedule(d.n)
    bits = np.asarray(r.bits, dtype=np.uint8)
    try:
        lo, coeffs = _backend.kernel.sweep_bracket(sched, bits)
    except OverflowError:
        lo, coeffs = _backend.python_kernel.sweep_bracket(sched, r.bits)
    return LaurentPoly(lo, coeffs)


def bracket_pd(pd: PlanarDiagram) -> LaurentPoly:
    """State sum straight from a PD code.

    ``X[a,b,c,d]`` contributes ``A`` for the smoothing joining a-b and c-d
    and ``A^-1`` for the one joining a-d and b-c.
    """
    xs = pd.crossings
    c = len(xs)
    if c > STATESUM_LIMIT:
        raise ValueError(f"{c} crossings exceed the state-sum limit of {STATESUM_LIMIT}")
    labels = sorted({lab for x in xs for lab in x.labels()})
    index = {lab: i for i, lab in enumerate(labels)}
    powers = _loop_powers(c + 1)
    terms: dict[int, int] = {}
    for mask in range(1 << c):
        parent = list(range(len(labels)))
        for i, x in enumerate(xs):
            a, b, cc, dd = (index[v] for v in x.labels())
            pairs = ((a, dd), (b, cc)) if (mask >> i) & 1 else ((a, b), (cc, dd))
            for u, v in pairs:
                ru, rv = _find(parent, u), _find(parent, v)
                if ru != rv:
                    parent[ru] = rv
        loops = len({_find(parent, v) for v in range(len(labels))})
        shift = c - 2 * bin(mask).count("1")
        for e, v in powers[loops - 1].terms().items():
            terms[e + shift] = terms.get(e + shift, 0) + v
    return LaurentPoly.from_terms(terms)


def bracket_to_jones(bracket: LaurentPoly, w: int) -> LaurentPoly:
    """``(-A)**(-3w) * bracket`` in the variable ``q = A**-2``."""
    scaled = bracket.shift(-3 * w)
    if w % 2:
        scaled = -scaled
    return scaled.divide_exponents(-2)


def jones(d: LatticeDiagram, r: Resolution, engine: Engine | str = Engine.SWEEP,
          cube: SmoothingCube | None = None) -> LaurentPoly:
    """Reduced Jones polynomial in ``q``; the unknot gives 1."""
    engine = Engine(engine)
    if engine is Engine.SWEEP:
        b = bracket_sweep(d, r)
    elif engine is Engine.STATESUM:
        b = bracket_statesum(d, r, cube)
    else:
        from .lattice import to_pd
        b = bracket_pd(to_pd(d, r))
    return bracket_to_jones(b, writhe(d, r))


def batch_jones(d: LatticeDiagram, resolutions: Iterable[Resolution],
                engine: Engine | str = Engine.SWEEP, chunk: int = 4096,
                cube: SmoothingCube | None = None) -> Iterator[tuple[Resolution, object]]:
    """Yield ``(resolution, jones)`` in input order.

    A failing item yields its exception in place of the polynomial and the
    stream carries on. The sweep engine evaluates whole chunks in the kernel.
    """
    engine = Engine(engine)
    if engine is not Engine.SWEEP:
        if engine is Engine.STATESUM and cube is None and d.crossing_count > 12:
            cube = precompute_cube(d)
        for r in resolutions:
            try:
                yield r, jones(d, r, engine, cube)
            except (ValueError, ArithmeticError) as exc:
                yield r, exc
        return
    sched = build_schedule(d.n)
    c = d.crossing_count
    buf: list[Resolution] = []

    def flush() -> Iterator[tuple[Resolution, object]]:
        good = [r for r in buf if r.n == d.n]
        keys = iter(_backend.kernel.jones_keys(
            sched, np.asarray([r.bits for r in good], dtype=np.uint8).reshape(len(good), c)))
        for r in buf:
            if r.n != d.n:
                yield r, ValueError(f"resolution is for n={r.n}, diagram has n={d.n}")
                continue
            key = next(keys)
            if key is None:
                yield r, jones(d, r)
            else:
                yield r, LaurentPoly.from_key(key)

    for r in resolutions:
        buf.append(r)
        if len(buf) >= chunk:
            yield from flush()
            buf = []
    if buf:
        yield from flush()

"""Potholder lattice diagrams and their crossing resolutions.

The curve for size parameter ``n`` has ``2n+1`` horizontal and ``2n+1``
vertical segments on a ``(2n+1) x (2n+1)`` grid. Along each side of the
grid neighbouring strand ends are joined by small caps; the one end left
over on each side goes around a corner:

* rows are traversed boustrophedon from the top: row 0 left to right, row 1
  right to left, ...;
* the right end of the bottom row turns around the lower right corner into
  the bottom of the last column;
* columns are traversed boustrophedon from the right: the last column
  upward, the one before it downward, ..., column 0 upward;
* the top of column 0 turns around the upper left corner into the left end
  of row 0.

None of the boundary arcs cross.

A resolution is a string over ``+``/``-`` in row-major order (row 0 on
top). ``+`` means the horizontal strand is over.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

__all__ = [
    "N", "E", "S", "W",
    "Visit", "LatticeDiagram", "Resolution", "PDCrossing", "PlanarDiagram",
    "build_diagram", "writhe", "crossing_signs", "mirror", "embed",
    "alternating_resolution", "to_pd", "parse_resolution", "random_resolution",
    "is_alternating",
]

# Port directions, counterclockwise order E, N, W, S.
E, N, W, S = 0, 1, 2, 3
PORT_NAMES = "ENWS"
_UNIT = {E: (1, 0), N: (0, 1), W: (-1, 0), S: (0, -1)}
_OPPOSITE = {E: W, W: E, N: S, S: N}


@dataclass(frozen=True)
class Visit:
    row: int
    col: int
    horizontal: bool
    entry: int
    exit: int

    @property
    def direction(self) -> tuple[int, int]:
        return _UNIT[self.exit]


@dataclass(frozen=True)
class Resolution:
    """Over/under choice per crossing, row-major; ``bits[i]`` is 1 for ``-``."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != (2 * self.n + 1) ** 2:
            raise ValueError(
                f"expected {(2 * self.n + 1) ** 2} crossings, got {len(self.bits)}")

    def __str__(self) -> str:
        return "".join("-" if b else "+" for b in self.bits)

    @property
    def code(self) -> int:
        """Integer with bit ``i`` set iff crossing ``i`` is ``-``."""
        return sum(1 << i for i, b in enumerate(self.bits) if b)

    @classmethod
    def from_code(cls, n: int, code: int) -> Resolution:
        c = (2 * n + 1) ** 2
        return cls(n, tuple((code >> i) & 1 for i in range(c)))

    @classmethod
    def all_plus(cls, n: int) -> Resolution:
        return cls(n, (0,) * (2 * n + 1) ** 2)


class LatticeDiagram:
    """The closed potholder curve of size ``n`` (immutable).

    ``trace`` lists the ``2 * (2n+1)**2`` crossing visits in curve order.
    Edge ``e`` of the diagram runs from visit ``e`` to visit ``e + 1``
    (cyclically). ``port_edge[i][p]`` is the edge attached to port ``p`` of
    crossing ``i``.
    """

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self.size = 2 * n + 1
        self.crossing_count = self.size ** 2
        self.trace: tuple[Visit, ...] = tuple(_potholder_trace(n))
        self.port_edge = self._attach_edges()
        self._check_single_curve()
        # sign of each crossing when resolved '+' (horizontal over)
        self.plus_signs: tuple[int, ...] = tuple(self._plus_sign(i)
                                                 for i in range(self.crossing_count))

    def index(self, row: int, col: int) -> int:
        return row * self.size + col

    def position(self, i: int) -> tuple[int, int]:
        return divmod(i, self.size)

    def _attach_edges(self) -> tuple[tuple[int, int, int, int], ...]:
        ports = [[-1] * 4 for _ in range(self.crossing_count)]
        m = len(self.trace)
        for e, v in enumerate(self.trace):
            nxt = self.trace[(e + 1) % m]
            i, j = self.index(v.row, v.col), self.index(nxt.row, nxt.col)
            if ports[i][v.exit] != -1 or ports[j][nxt.entry] != -1:
                raise AssertionError("port attached twice")
            ports[i][v.exit] = e
            ports[j][nxt.entry] = e
        return tuple(tuple(p) for p in ports)

    def _check_single_curve(self) -> None:
        seen_h, seen_v = set(), set()
        for v in self.trace:
            (seen_h if v.horizontal else seen_v).add((v.row, v.col))
        cells = {(r, c) for r in range(self.size) for c in range(self.size)}
        if seen_h != cells or seen_v != cells or len(self.trace) != 2 * self.crossing_count:
            raise AssertionError("trace is not a single closed potholder curve")
        if any(p == -1 for ports in self.port_edge for p in ports):
            raise AssertionError("unattached port")

    def visits_of(self, i: int) -> tuple[Visit, Visit]:
        """(horizontal visit, vertical visit) of crossing ``i``."""
        r, c = self.position(i)
        h = v = None
        for t in self.trace:
            if t.row == r and t.col == c:
                if t.horizontal:
                    h = t
                else:
                    v = t
        return h, v

    def _plus_sign(self, i: int) -> int:
        h, v = self.visits_of(i)
        (ox, oy), (ux, uy) = h.direction, v.direction
        return 1 if ox * uy - oy * ux > 0 else -1

    def edge_ends(self) -> list[tuple[int, int]]:
        """For each edge, the (crossing, crossing) pair it joins (tail, head)."""
        ends = [[-1, -1] for _ in range(len(self.trace))]
        for i, ports in enumerate(self.port_edge):
            for p, e in enumerate(ports):
                tail = self.trace[e]
                if self.index(tail.row, tail.col) == i and tail.exit == p and ends[e][0] == -1:
                    ends[e][0] = i
                else:
                    ends[e][1] = i
        return [tuple(x) for x in ends]

    def __repr__(self) -> str:
        return f"LatticeDiagram(n={self.n})"


def _potholder_trace(n: int) -> list[Visit]:
    size = 2 * n + 1
    trace = []
    for r in range(size):
        cols = range(size) if r % 2 == 0 else range(size - 1, -1, -1)
        entry, exit_ = (W, E) if r % 2 == 0 else (E, W)
        trace.extend(Visit(r, c, True, entry, exit_) for c in cols)
    for c in range(size - 1, -1, -1):
        rows = range(size - 1, -1, -1) if c % 2 == 0 else range(size)
        entry, exit_ = (S, N) if c % 2 == 0 else (N, S)
        trace.extend(Visit(r, c, False, entry, exit_) for r in rows)
    return trace


@lru_cache(maxsize=None)
def build_diagram(n: int) -> LatticeDiagram:
    return LatticeDiagram(n)


def _check(d: LatticeDiagram, r: Resolution) -> None:
    if r.n != d.n:
        raise ValueError(f"resolution is for n={r.n}, diagram has n={d.n}")


def crossing_signs(d: LatticeDiagram, r: Resolution) -> list[int]:
    _check(d, r)
    return [-s if b else s for s, b in zip(d.plus_signs, r.bits)]


def writhe(d: LatticeDiagram, r: Resolution) -> int:
    return sum(crossing_signs(d, r))


def mirror(r: Resolution) -> Resolution:
    return Resolution(r.n, tuple(1 - b for b in r.bits))


def parse_resolution(text: str, n: int) -> Resolution:
    text = text.strip().replace("−", "-")
    expected = (2 * n + 1) ** 2
    if len(text) != expected:
        raise ValueError(f"expected {expected} characters for n={n}, got {len(text)}")
    bad = [i for i, ch in enumerate(text) if ch not in "+-"]
    if bad:
        raise ValueError(f"invalid character {text[bad[0]]!r} at position {bad[0]}; use '+' or '-'")
    return Resolution(n, tuple(1 if ch == "-" else 0 for ch in text))


def random_resolution(n: int, rng: random.Random) -> Resolution:
    c = (2 * n + 1) ** 2
    return Resolution.from_code(n, rng.getrandbits(c))


def alternating_resolution(n: int) -> Resolution:
    """Checkerboard resolution; over and under alternate along the whole curve."""
    if n < 1:
        raise ValueError("n must be >= 1 (the one-crossing diagram is the unknot)")
    size = 2 * n + 1
    return Resolution(n, tuple((r + c) % 2 for r in range(size) for c in range(size)))


def is_alternating(d: LatticeDiagram, r: Resolution) -> bool:
    _check(d, r)
    over = []
    for v in d.trace:
        plus = r.bits[d.index(v.row, v.col)] == 0
        over.append(plus == v.horizontal)
    return all(over[i] != over[i - 1] for i in range(len(over)))


def embed(r: Resolution, n: int, row_off: int = 0, col_off: int = 0) -> Resolution:
    """Place ``r`` as a block of a size-``n`` lattice with untying padding.

    Every added row (column) is given a constant over/under character, so
    the surplus loops of the bigger curve lift off and leave the knot of the
    block. Rows above the block go under every column, rows below go over;
    columns left of the block pass over the block rows, columns right of
    it pass under. Each peeled strand therefore stays entirely on one side
    of the rest of the curve.
    """
    k = r.n
    if n < k:
        raise ValueError("target lattice is smaller than the block")
    if row_off % 2 or col_off % 2:
        raise ValueError("offsets must be even")
    if row_off < 0 or col_off < 0 or row_off + 2 * k + 1 > 2 * n + 1 \
            or col_off + 2 * k + 1 > 2 * n + 1:
        raise ValueError("block does not fit at this offset")
    size, bsize = 2 * n + 1, 2 * k + 1
    bits = []
    for row in range(size):
        for col in range(size):
            br, bc = row - row_off, col - col_off
            if br < 0:
                bits.append(1)  # row above the block: horizontal under
            elif br >= bsize:
                bits.append(0)  # row below the block: horizontal over
            elif bc < 0:
                bits.append(1)  # column to the left: vertical over
            elif bc >= bsize:
                bits.append(0)  # column to the right: vertical under
            else:
                bits.append(r.bits[br * bsize + bc])
    return Resolution(n, tuple(bits))


@dataclass(frozen=True)
class PDCrossing:
    """Arc labels counterclockwise from the incoming under-strand."""

    a: int
    b: int
    c: int
    d: int

    def labels(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: tuple[PDCrossing, ...]
    # arc -> (tail crossing index, head crossing index) along the orientation
    orientation: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        body = ",".join(f"X[{x.a},{x.b},{x.c},{x.d}]" for x in self.crossings)
        return f"PD[{body}]"

    @property
    def arc_count(self) -> int:
        return len(self.orientation)


def to_pd(d: LatticeDiagram, r: Resolution) -> PlanarDiagram:
    """PD code with arcs labelled ``1..2c`` in trace order."""
    _check(d, r)
    crossings = []
    for i, ports in enumerate(d.port_edge):
        h, v = d.visits_of(i)
        under = v if r.bits[i] == 0 else h
        start = under.entry
        order = [(start + k) % 4 for k in range(4)]  # counterclockwise
        crossings.append(PDCrossing(*(ports[p] + 1 for p in order)))
    orient = tuple((t, h) for t, h in d.edge_ends())
    return PlanarDiagram(tuple(crossings), orient)


def pd_signs(pd: PlanarDiagram) -> list[int]:
    """Crossing signs from a PD code alone (KnotTheory convention)."""
    m = pd.arc_count
    if m <= 2:
        raise ValueError("signs are ambiguous with two or fewer arcs")
    signs = []
    for x in pd.crossings:
        # over strand runs d -> b for a positive crossing
        if (x.b - x.d) % m == 1:
            signs.append(1)
        elif (x.d - x.b) % m == 1:
            signs.append(-1)
        else:
            raise ValueError("over-strand labels are not consecutive")
    return signs


def resolution_strings(rs: Sequence[Resolution]) -> list[str]:
    return [str(r) for r in rs]

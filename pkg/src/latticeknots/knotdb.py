"""Reference table of named knots and Jones-polynomial identification.

Table file format, UTF-8, one record per line, ``#`` starts a comment::

    name,crossing_number,type_letter,polynomial
    3_1,3,T,2:1,0,0,0,1,0,-1

``polynomial`` is the machine form ``min_exp:c0,c1,...`` in ``q``.
``type_letter`` is ``T`` (torus), ``H`` (hyperbolic), ``S`` (satellite) or
``U`` (unknown). The bundled table holds every prime knot with at most 10
crossings, one chirality each; mirrors are found through ``q -> 1/q``.

Set ``LATTICEKNOTS_TABLE`` to a path to replace the bundled file.
"""

from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import BinaryIO, Iterable, TextIO

from .laurent import LaurentPoly, ParseError

__all__ = [
    "KnotType", "JonesRecord", "JonesTable", "Identification", "Match",
    "TableError", "load_table", "load_table_file", "default_table",
    "default_table_path", "identify", "try_factor", "TABLE_ENV",
]

TABLE_ENV = "LATTICEKNOTS_TABLE"


class KnotType(str, enum.Enum):
    TORUS = "torus"
    HYPERBOLIC = "hyperbolic"
    SATELLITE = "satellite"
    UNKNOWN = "unknown"

    @property
    def letter(self) -> str:
        return self.value[0].upper()

    @classmethod
    def from_letter(cls, letter: str) -> KnotType:
        for t in cls:
            if t.letter == letter:
                return t
        raise ValueError(f"unknown type letter {letter!r}")


class TableError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class JonesRecord:
    name: str
    crossing_number: int
    knot_type: KnotType
    jones: LaurentPoly

    def validate(self) -> None:
        if self.jones.eval_at_one() != 1:
            raise ValueError(f"{self.name}: J(1) = {self.jones.eval_at_one()}, expected 1")
        if not self.jones.has_even_exponents():
            raise ValueError(f"{self.name}: Jones polynomial has odd exponents")

    def order_key(self) -> tuple:
        return (self.crossing_number, _name_key(self.name))


def _name_key(name: str) -> tuple:
    head, _, tail = name.partition("_")
    try:
        return (int(head), int(tail), name)
    except ValueError:
        return (1 << 30, 0, name)


@dataclass(frozen=True)
class Match:
    name: str
    mirrored: bool

    @property
    def label(self) -> str:
        return f"{self.name}^m" if self.mirrored else self.name


@dataclass(frozen=True)
class Identification:
    """Outcome of :func:`identify`.

    ``status`` is ``"known"``, ``"ambiguous"`` or ``"beyond_table"``.
    ``matches`` lists every record that fits, in table order.
    """

    status: str
    matches: tuple[Match, ...] = ()

    @property
    def known(self) -> bool:
        return self.status == "known"

    @property
    def beyond_table(self) -> bool:
        return self.status == "beyond_table"

    @property
    def name(self) -> str | None:
        return self.matches[0].name if self.status == "known" else None

    @property
    def mirrored(self) -> bool:
        return self.status == "known" and self.matches[0].mirrored

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.matches)

    @property
    def label(self) -> str:
        return "|".join(m.label for m in self.matches)


class JonesTable:
    """Immutable set of records with a polynomial index."""

    def __init__(self, records: Iterable[JonesRecord]):
        self._records = tuple(sorted(records, key=JonesRecord.order_key))
        self._by_name: dict[str, JonesRecord] = {}
        self._by_poly: dict[LaurentPoly, list[JonesRecord]] = {}
        for rec in self._records:
            if rec.name in self._by_name:
                raise ValueError(f"duplicate name {rec.name}")
            self._by_name[rec.name] = rec
            self._by_poly.setdefault(rec.jones, []).append(rec)

    @property
    def records(self) -> tuple[JonesRecord, ...]:
        return self._records

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> JonesRecord:
        return self._by_name[name]

    def lookup(self, p: LaurentPoly) -> tuple[JonesRecord, ...]:
        return tuple(self._by_poly.get(p, ()))

    def collisions(self) -> list[tuple[str, ...]]:
        """Groups of names sharing a Jones polynomial up to mirror."""
        seen, out = set(), []
        for rec in self._records:
            if rec.name in seen:
                continue
            group = {r.name for r in self.lookup(rec.jones)}
            group |= {r.name for r in self.lookup(rec.jones.substitute_inverse())}
            seen |= group
            if len(group) > 1:
                out.append(tuple(sorted(group, key=_name_key)))
        return out


def load_table(source: BinaryIO | TextIO | bytes | str) -> JonesTable:
    """Parse a table from a byte stream, text stream, or raw content."""
    if isinstance(source, bytes):
        source = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        source = io.StringIO(source)
    else:
        probe = source.read(0)
        if isinstance(probe, bytes):
            source = io.TextIOWrapper(source, encoding="utf-8")
    records, names = [], set()
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",", 3)
        if len(fields) != 4:
            raise TableError("expected name,crossing_number,type_letter,polynomial", lineno)
        name, cn, letter, poly = (f.strip() for f in fields)
        if not name:
            raise TableError("empty name", lineno)
        if name in names:
            raise TableError(f"duplicate name {name}", lineno)
        try:
            crossings = int(cn)
        except ValueError:
            raise TableError(f"bad crossing number {cn!r}", lineno) from None
        if crossings < 0:
            raise TableError("negative crossing number", lineno)
        try:
            ktype = KnotType.from_letter(letter)
        except ValueError as exc:
            raise TableError(str(exc), lineno) from None
        if ":" not in poly:
            raise TableError("polynomial must be in min_exp:c0,c1,... form", lineno)
        try:
            jones = LaurentPoly.parse(poly)
        except ParseError as exc:
            raise TableError(f"bad polynomial: {exc}", lineno) from None
        rec = JonesRecord(name, crossings, ktype, jones)
        try:
            rec.validate()
        except ValueError as exc:
            raise TableError(str(exc), lineno) from None
        names.add(name)
        records.append(rec)
    return JonesTable(records)


def load_table_file(path: str | os.PathLike) -> JonesTable:
    with open(path, "rb") as f:
        return load_table(f)


def default_table_path() -> str:
    override = os.environ.get(TABLE_ENV)
    if override:
        return override
    return str(resources.files("latticeknots") / "data" / "knots10.csv")


@lru_cache(maxsize=4)
def _cached_table(path: str) -> JonesTable:
    return load_table_file(path)


def default_table() -> JonesTable:
    """Bundled table, or the file named by ``LATTICEKNOTS_TABLE``."""
    return _cached_table(default_table_path())


def identify(p: LaurentPoly, table: JonesTable) -> Identification:
    direct = [Match(r.name, False) for r in table.lookup(p)]
    mirror: list[Match] = []
    if not p.is_palindromic():
        mirror = [Match(r.name, True) for r in table.lookup(p.substitute_inverse())]
    found = direct + mirror
    if not found:
        return Identification("beyond_table")
    if len(found) == 1:
        return Identification("known", tuple(found))
    order = {r.name: i for i, r in enumerate(table.records)}
    found.sort(key=lambda m: (order[m.name], m.mirrored))
    return Identification("ambiguous", tuple(found))


def try_factor(p: LaurentPoly, table: JonesTable) -> tuple[Match, Match] | None:
    """First ordered pair of non-trivial table knots whose product is ``p``.

    Candidates (records and their mirrors) are tried by crossing number,
    then name, plain before mirrored.
    """
    candidates = []
    for rec in table.records:
        if rec.jones == 1:
            continue
        candidates.append((Match(rec.name, False), rec.jones))
        if not rec.jones.is_palindromic():
            candidates.append((Match(rec.name, True), rec.jones.substitute_inverse()))
    rank = {(m.name, m.mirrored): i for i, (m, _) in enumerate(candidates)}
    for first, poly in candidates:
        if poly.span > p.span:
            continue
        rest = p.exact_div(poly)
        if rest is None or rest == 1:
            continue
        hits = [Match(r.name, False) for r in table.lookup(rest) if r.jones != 1]
        if not rest.is_palindromic():
            hits += [Match(r.name, True) for r in table.lookup(rest.substitute_inverse())]
        if hits:
            second = min(hits, key=lambda m: rank[(m.name, m.mirrored)])
            return first, second
    return None

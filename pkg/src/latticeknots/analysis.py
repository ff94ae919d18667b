"""Censuses of lattice knots: exhaustive enumeration, sampling, stratification.

Unknots are detected as resolutions with Jones polynomial 1. If a
non-trivial knot with trivial Jones polynomial exists, unknot counts here
are an overestimate; none is known.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _backend
from ._schedule import build_schedule
from .bracket import Engine, batch_jones
from .knotdb import Identification, JonesTable, identify
from .lattice import Resolution, build_diagram
from .laurent import LaurentPoly

__all__ = [
    "MirrorMode", "canonicalize", "CensusEntry", "CensusReport", "enumerate_census",
    "SampleEstimate", "sample_census", "wilson_interval", "Stratification",
    "StratumEntry", "stratify", "FORMAT_VERSION", "GENERATOR",
]

FORMAT_VERSION = 1
GENERATOR = "numpy.random.PCG64 seeded by SeedSequence(seed, spawn_key=(chunk,))"
UNKNOT_NOTE = ("unknots are detected by trivial Jones polynomial; "
               "this overcounts if a non-trivial knot with J = 1 exists")
MAX_ENUMERATE_N = 2
SAMPLE_CHUNK = 4096
CHUNK_FREE_BITS = 15
_UNKNOT_KEY = LaurentPoly.one().key()

Progress = Callable[[int, int], None]


class MirrorMode(str, enum.Enum):
    SEPARATE = "separate"
    FOLDED = "folded"


def canonicalize(p: LaurentPoly, mode: MirrorMode | str = MirrorMode.FOLDED) -> LaurentPoly:
    """``p`` itself, or in folded mode the smaller of ``p`` and its mirror."""
    if MirrorMode(mode) is MirrorMode.SEPARATE:
        return p
    m = p.substitute_inverse()
    return m if m.sort_key() < p.sort_key() else p


@dataclass
class CensusEntry:
    count: int
    representative: Resolution
    identification: Identification | None = None


@dataclass
class CensusReport:
    n: int
    total: int
    mirror_mode: MirrorMode
    entries: dict[LaurentPoly, CensusEntry]
    engine: str = Engine.SWEEP.value
    runtime: float = 0.0

    @property
    def distinct_count(self) -> int:
        return len(self.entries)

    @property
    def unknot_count(self) -> int:
        e = self.entries.get(LaurentPoly.one())
        return e.count if e else 0

    @property
    def unknot_ratio(self) -> float:
        return self.unknot_count / self.total if self.total else 0.0

    def count_of(self, name: str, mirrored: bool | None = None) -> int:
        """Total count of entries identified as ``name`` (either chirality by default)."""
        total = 0
        for e in self.entries.values():
            ident = e.identification
            if ident is None or not ident.known or ident.name != name:
                continue
            if mirrored is None or ident.mirrored == mirrored:
                total += e.count
        return total

    def sorted_entries(self) -> list[tuple[LaurentPoly, CensusEntry]]:
        return sorted(self.entries.items(), key=lambda kv: (-kv[1].count, kv[0].sort_key()))

    def to_csv(self, table: JonesTable | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["polynomial", "count", "name", "mirrored", "type"])
        for poly, e in self.sorted_entries():
            ident = e.identification
            name, mirrored, ktype = "", "", ""
            if ident is not None and not ident.beyond_table:
                name = ident.name if ident.known else "|".join(ident.names)
                mirrored = int(ident.mirrored) if ident.known else ""
                if table is not None:
                    ktype = "|".join(sorted({table[x].knot_type.letter for x in ident.names}))
            w.writerow([poly.to_machine(), e.count, name, mirrored, ktype])
        return buf.getvalue()

    def summary(self) -> dict:
        beyond = sum(e.count for e in self.entries.values()
                     if e.identification is not None and e.identification.beyond_table)
        return {
            "format_version": FORMAT_VERSION,
            "kind": "census",
            "n": self.n,
            "total": self.total,
            "distinct": self.distinct_count,
            "mirror_mode": self.mirror_mode.value,
            "unknot_count": self.unknot_count,
            "unknot_ratio": self.unknot_ratio,
            "beyond_table_count": beyond,
            "engine": self.engine,
            "note": UNKNOT_NOTE,
            "runtime_seconds": round(self.runtime, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


# exhaustive enumeration

def _census_chunk(args: tuple[int, int, int]) -> tuple[int, dict]:
    n, prefix_len, prefix = args
    sched = build_schedule(n)
    try:
        return prefix, _backend.kernel.census(sched, prefix_len, prefix)
    except OverflowError:
        return prefix, _backend.python_kernel.census(sched, prefix_len, prefix)


def _merge(into: dict, part: dict) -> None:
    for key, (count, code) in part.items():
        cur = into.get(key)
        if cur is None:
            into[key] = [count, code]
        else:
            cur[0] += count
            if code < cur[1]:
                cur[1] = code


def _load_checkpoint(path: str, n: int, prefix_len: int) -> tuple[set, dict]:
    if not path or not os.path.exists(path):
        return set(), {}
    with open(path, encoding="utf-8") as f:
        state = json.load(f)
    if state.get("n") != n or state.get("prefix_len") != prefix_len:
        raise ValueError(f"checkpoint {path} belongs to a different run")
    counts = {bytes.fromhex(k): v for k, v in state["counts"].items()}
    return set(state["done"]), counts


def _save_checkpoint(path: str, n: int, prefix_len: int, done: set, counts: dict) -> None:
    state = {"format_version": FORMAT_VERSION, "n": n, "prefix_len": prefix_len,
             "done": sorted(done), "counts": {k.hex(): v for k, v in counts.items()}}
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(state, f)
    os.replace(tmp, path)


def _pool(workers: int, initializer=None, initargs=()):
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork" if "fork" in methods else "spawn")
    return ctx.Pool(workers, initializer, initargs)


def _raw_census(n: int, engine: Engine, workers: int, checkpoint: str | None,
                progress: Progress | None, free_bits: int) -> dict:
    """``{jones key: [count, min code]}`` over every resolution."""
    c = (2 * n + 1) ** 2
    if engine is not Engine.SWEEP:
        d = build_diagram(n)
        counts: dict = {}
        rs = (Resolution.from_code(n, code) for code in range(1 << c))
        for r, j in batch_jones(d, rs, engine):
            if isinstance(j, Exception):
                raise j
            _merge(counts, {j.key(): [1, r.code]})
        return counts
    prefix_len = max(0, c - free_bits)
    tasks = 1 << prefix_len
    done, counts = _load_checkpoint(checkpoint, n, prefix_len) if checkpoint else (set(), {})
    todo = [(n, prefix_len, p) for p in range(tasks) if p not in done]
    last_save = time.monotonic()

    def absorb(prefix: int, part: dict) -> None:
        nonlocal last_save
        _merge(counts, part)
        done.add(prefix)
        if progress:
            progress(len(done), tasks)
        if checkpoint and (time.monotonic() - last_save > 30 or len(done) == tasks):
            _save_checkpoint(checkpoint, n, prefix_len, done, counts)
            last_save = time.monotonic()

    try:
        if workers > 1 and len(todo) > 1:
            with _pool(workers) as pool:
                for prefix, part in pool.imap_unordered(_census_chunk, todo, chunksize=4):
                    absorb(prefix, part)
        else:
            for t in todo:
                absorb(*_census_chunk(t))
    finally:
        # an interrupted run keeps what it finished
        if checkpoint and done:
            _save_checkpoint(checkpoint, n, prefix_len, done, counts)
    return counts


def enumerate_census(n: int, engine: Engine | str = Engine.SWEEP, table: JonesTable | None = None,
                     mode: MirrorMode | str = MirrorMode.SEPARATE, workers: int = 1,
                     checkpoint: str | None = None, progress: Progress | None = None,
                     free_bits: int = CHUNK_FREE_BITS) -> CensusReport:
    """Jones polynomial of every resolution of the size-``n`` lattice, aggregated.

    Work is split by fixed prefixes of the resolution code, so the result
    does not depend on ``workers``. Each task fixes all but ``free_bits``
    crossings. With ``checkpoint`` the partial counts are saved periodically
    and on interruption, and a rerun resumes from them.
    """
    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be a non-negative integer")
    if n > MAX_ENUMERATE_N:
        raise ValueError(f"n={n} is too large to enumerate (2^{(2 * n + 1) ** 2} resolutions); "
                         "use sample_census instead")
    engine, mode = Engine(engine), MirrorMode(mode)
    start = time.perf_counter()
    if not 1 <= free_bits <= 25:
        raise ValueError("free_bits must be between 1 and 25")
    raw = _raw_census(n, engine, max(1, workers), checkpoint, progress, free_bits)
    entries: dict[LaurentPoly, list] = {}
    for key, (count, code) in raw.items():
        p = canonicalize(LaurentPoly.from_key(key), mode)
        cur = entries.get(p)
        if cur is None:
            entries[p] = [count, code]
        else:
            cur[0] += count
            cur[1] = min(cur[1], code)
    out = {p: CensusEntry(cnt, Resolution.from_code(n, code),
                          identify(p, table) if table is not None else None)
           for p, (cnt, code) in entries.items()}
    total = sum(e.count for e in out.values())
    return CensusReport(n, total, mode, out, engine.value, time.perf_counter() - start)


# sampling

def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval (95% by default)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class SampleEstimate:
    n: int
    samples: int
    seed: int
    unknot_count: int
    beyond_table_count: int
    engine: str = Engine.SWEEP.value
    runtime: float = 0.0
    generator: str = GENERATOR
    chunk_size: int = SAMPLE_CHUNK

    @property
    def unknot_ratio(self) -> float:
        return self.unknot_count / self.samples

    @property
    def beyond_table_ratio(self) -> float:
        return self.beyond_table_count / self.samples

    @property
    def unknot_ci(self) -> tuple[float, float]:
        return wilson_interval(self.unknot_count, self.samples)

    @property
    def beyond_table_ci(self) -> tuple[float, float]:
        return wilson_interval(self.beyond_table_count, self.samples)

    def summary(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "sample",
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "generator": self.generator,
            "numpy_version": np.__version__,
            "chunk_size": self.chunk_size,
            "engine": self.engine,
            "unknot_count": self.unknot_count,
            "unknot_ratio": self.unknot_ratio,
            "unknot_ci95": list(self.unknot_ci),
            "beyond_table_count": self.beyond_table_count,
            "beyond_table_ratio": self.beyond_table_ratio,
            "beyond_table_ci95": list(self.beyond_table_ci),
            "note": UNKNOT_NOTE,
            "runtime_seconds": round(self.runtime, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def chunk_bits(seed: int, chunk: int, size: int, crossings: int) -> np.ndarray:
    """Uniform resolution bits for one chunk; depends only on (seed, chunk)."""
    ss = np.random.SeedSequence(seed, spawn_key=(chunk,))
    rng = np.random.Generator(np.random.PCG64(ss))
    return rng.integers(0, 2, size=(size, crossings), dtype=np.uint8)


_worker_table: JonesTable | None = None


def _init_sample_worker(table: JonesTable) -> None:
    global _worker_table
    _worker_table = table


def _sample_chunk(args: tuple[int, int, int, int]) -> tuple[int, int]:
    n, seed, chunk, size = args
    table = _worker_table
    c = (2 * n + 1) ** 2
    bits = chunk_bits(seed, chunk, size, c)
    sched = build_schedule(n)
    keys = _backend.kernel.jones_keys(sched, bits)
    unknots = beyond = 0
    cache: dict[bytes, bool] = {}
    for row, key in enumerate(keys):
        if key is None:
            key = _backend.python_kernel.jones_key(sched, bits[row].tolist())
        if key == _UNKNOT_KEY:
            unknots += 1
            continue
        hit = cache.get(key)
        if hit is None:
            hit = identify(LaurentPoly.from_key(key), table).beyond_table
            cache[key] = hit
        beyond += hit
    return unknots, beyond


def sample_census(n: int, samples: int, seed: int, table: JonesTable, workers: int = 1,
                  progress: Progress | None = None) -> SampleEstimate:
    """Estimate unknot and beyond-table ratios from uniform random resolutions.

    Samples are drawn in fixed-size chunks, each from its own substream, so
    the estimate depends only on ``(n, samples, seed)``.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    start = time.perf_counter()
    tasks = [(n, seed, i, min(SAMPLE_CHUNK, samples - i * SAMPLE_CHUNK))
             for i in range(-(-samples // SAMPLE_CHUNK))]
    unknots = beyond = done = 0
    if workers > 1 and len(tasks) > 1:
        with _pool(workers, _init_sample_worker, (table,)) as pool:
            for u, b in pool.imap_unordered(_sample_chunk, tasks):
                unknots, beyond, done = unknots + u, beyond + b, done + 1
                if progress:
                    progress(done, len(tasks))
    else:
        _init_sample_worker(table)
        for t in tasks:
            u, b = _sample_chunk(t)
            unknots, beyond, done = unknots + u, beyond + b, done + 1
            if progress:
                progress(done, len(tasks))
    return SampleEstimate(n, samples, seed, unknots, beyond,
                          runtime=time.perf_counter() - start)


# stratification

@dataclass(frozen=True)
class StratumEntry:
    m: int
    index: int
    label: str


@dataclass
class Stratification:
    entries: dict[LaurentPoly, StratumEntry] = field(default_factory=dict)

    def __getitem__(self, p: LaurentPoly) -> StratumEntry:
        return self.entries[canonicalize(p)]

    def stratum(self, m: int) -> list[tuple[LaurentPoly, StratumEntry]]:
        return sorted(((p, e) for p, e in self.entries.items() if e.m == m),
                      key=lambda kv: kv[1].index)

    def find(self, name: str) -> StratumEntry | None:
        for e in self.entries.values():
            if name in e.label.split("|"):
                return e
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "l_m", "name", "polynomial"])
        for p, e in sorted(self.entries.items(), key=lambda kv: (kv[1].m, kv[1].index)):
            w.writerow([e.m, e.index, e.label, p.to_machine()])
        return buf.getvalue()


def stratify(reports: Sequence[CensusReport], table: JonesTable | None = None) -> Stratification:
    """Assign each knot its first lattice ``m`` and index ``l_m`` within it.

    ``reports`` must be folded censuses for ``n = 0, 1, ..., N``. Within a
    stratum knots are ordered by identified crossing number (unidentified
    last), then by polynomial.
    """
    by_n = {r.n: r for r in reports}
    if not by_n:
        raise ValueError("no censuses given")
    for n in range(max(by_n) + 1):
        if n not in by_n:
            raise ValueError(f"missing census for n={n}")
        if by_n[n].mirror_mode is not MirrorMode.FOLDED:
            raise ValueError(f"census for n={n} is not folded")
    out = Stratification()
    for m in range(max(by_n) + 1):
        fresh = []
        for p, e in by_n[m].entries.items():
            if p in out.entries:
                continue
            ident = e.identification
            if ident is None and table is not None:
                ident = identify(p, table)
            crossings = 1 << 30
            label = ""
            if ident is not None and not ident.beyond_table:
                label = "|".join(ident.names)
                if table is not None:
                    crossings = min(table[x].crossing_number for x in ident.names)
            fresh.append((crossings, p.sort_key(), p, label))
        fresh.sort(key=lambda t: (t[0], t[1]))
        for i, (_, _, p, label) in enumerate(fresh, start=1):
            out.entries[p] = StratumEntry(m, i, label)
    return out


"""Lower and upper bounds on knot counts per lattice, and census checks.

For a ``(2n+1) x (2n+1)`` lattice, stratum ``k`` (``0 <= k <= n``) holds
the knots whose crossing number lies in ``[(2k-1)^2, (2k+1)^2 - 2]``
(stratum 0 is the unknot, stratum 1 starts at 3). With ``d(a, b)`` the
Kronecker delta::

    sigma_min(n, k) = (n-k+1)^2 * (2^(2(n-k)(n+k+2))
                      + 2^((n-k)(n+3k+4)) * (1 - d(n-k, 1) - d(n-k, 0)))

    sigma_total_min(n, k) = 8k * sigma_min(n, k)     k > 1
                          = 6 * sigma_min(n, 1)      k = 1  (6 n^2 [...])
                          = sigma_min(n, 0)          k = 0

    sigma_upper(n, k) = 2^((2n+1)^2) - sum_i sigma_total_min(n, i)
                        + sigma_min(n, k)

Everything is exact integer arithmetic. The published worked examples are
kept as reference data; rows where they disagree with the formulas carry a
``paper-discrepancy`` flag instead of being adjusted.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

__all__ = [
    "sigma_min", "sigma_total_min", "sigma_upper", "BoundsRow", "BoundsReport",
    "bounds_report", "stratum_range", "stratum_of", "check_census",
    "StratumCheck", "CensusCheck", "PAPER_VALUES", "PAPER_INTERMEDIATES",
]

# Published worked examples: (n, k) -> (lower, upper)
PAPER_VALUES: dict[tuple[int, int], tuple[int, int]] = {
    (1, 1): (1, 252),
    (1, 0): (256, 506),
    (2, 2): (1, 2 ** 25 - 632_847),
    (2, 1): (1024, 2 ** 25 - 631_824),
    (2, 0): (626_688, 2 ** 25 - 6144),
}

# Intermediates the published n=2 upper bounds are consistent with.
PAPER_INTERMEDIATES: dict[str, dict[tuple[int, int], int]] = {
    "sigma_min": {(2, 1): 1024},
    "sigma_total_min": {(2, 1): 6144},
}

MATCH = "match"
MATCH_INTERMEDIATES = "match-with-paper-intermediates"
DISCREPANCY = "paper-discrepancy"


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def _check_domain(n: int, k: int) -> None:
    if not (isinstance(n, int) and isinstance(k, int)) or not 0 <= k <= n:
        raise ValueError(f"need integers 0 <= k <= n, got n={n}, k={k}")


def _bracket(n: int, k: int) -> int:
    m = n - k
    return 2 ** (2 * m * (n + k + 2)) + 2 ** (m * (n + 3 * k + 4)) * (1 - _delta(m, 1) - _delta(m, 0))


def sigma_min(n: int, k: int) -> int:
    """Lower bound on the number of resolutions realizing one knot of stratum ``k``."""
    _check_domain(n, k)
    return (n - k + 1) ** 2 * _bracket(n, k)


def sigma_total_min(n: int, k: int) -> int:
    """Lower bound on the number of resolutions in stratum ``k``."""
    _check_domain(n, k)
    if k > 1:
        return 8 * k * sigma_min(n, k)
    if k == 1:
        return 6 * n * n * _bracket(n, 1)
    return sigma_min(n, 0)


def sigma_upper(n: int, k: int, overrides: dict[str, dict[tuple[int, int], int]] | None = None) -> int:
    """Upper bound on the stratum-``k`` count.

    ``overrides`` replaces individual ``sigma_min`` / ``sigma_total_min``
    values, e.g. :data:`PAPER_INTERMEDIATES`.
    """
    _check_domain(n, k)
    ov = overrides or {}
    smin = ov.get("sigma_min", {})
    stot = ov.get("sigma_total_min", {})
    total = sum(stot.get((n, i), sigma_total_min(n, i)) for i in range(n + 1))
    return 2 ** ((2 * n + 1) ** 2) - total + smin.get((n, k), sigma_min(n, k))


@dataclass(frozen=True)
class BoundsRow:
    k: int
    lower: int
    total_lower: int
    upper: int
    upper_paper_intermediates: int
    paper_lower: int | None = None
    paper_upper: int | None = None
    lower_status: str = ""
    upper_status: str = ""

    @property
    def discrepancy(self) -> bool:
        return DISCREPANCY in (self.lower_status, self.upper_status)


@dataclass(frozen=True)
class BoundsReport:
    n: int
    rows: tuple[BoundsRow, ...]
    notes: tuple[str, ...] = field(default=())

    def row(self, k: int) -> BoundsRow:
        return self.rows[k]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "lower", "total_lower", "upper", "upper_paper_intermediates",
                    "paper_lower", "paper_upper", "lower_status", "upper_status"])
        for r in self.rows:
            w.writerow([r.k, r.lower, r.total_lower, r.upper, r.upper_paper_intermediates,
                        "" if r.paper_lower is None else r.paper_lower,
                        "" if r.paper_upper is None else r.paper_upper,
                        r.lower_status, r.upper_status])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"bounds for the {2 * self.n + 1}x{2 * self.n + 1} lattice (n={self.n})"]
        for r in self.rows:
            lines.append(f"k={r.k}: [{r.lower}, {r.upper}]  total_lower={r.total_lower}")
            if r.paper_lower is not None:
                lines.append(f"    paper: [{r.paper_lower}, {r.paper_upper}]  "
                             f"lower {r.lower_status}, upper {r.upper_status}")
                if r.upper_status != MATCH:
                    lines.append(f"    upper with paper intermediates: {r.upper_paper_intermediates}")
        lines.extend(f"note: {s}" for s in self.notes)
        return "\n".join(lines) + "\n"


def _status(formula: int, paper: int | None, alt: int | None = None) -> str:
    if paper is None:
        return ""
    if formula == paper:
        return MATCH
    if alt is not None and alt == paper:
        return MATCH_INTERMEDIATES
    return DISCREPANCY


def bounds_report(n: int) -> BoundsReport:
    if not isinstance(n, int) or n < 0:
        raise ValueError("n must be a non-negative integer")
    rows = []
    for k in range(n + 1):
        lo, hi = PAPER_VALUES.get((n, k), (None, None))
        upper = sigma_upper(n, k)
        alt = sigma_upper(n, k, PAPER_INTERMEDIATES)
        rows.append(BoundsRow(
            k=k, lower=sigma_min(n, k), total_lower=sigma_total_min(n, k),
            upper=upper, upper_paper_intermediates=alt,
            paper_lower=lo, paper_upper=hi,
            lower_status=_status(sigma_min(n, k), lo),
            upper_status=_status(upper, hi, alt)))
    notes = []
    for (nn, k), v in PAPER_INTERMEDIATES["sigma_total_min"].items():
        if nn == n and sigma_total_min(n, k) != v:
            notes.append(f"{DISCREPANCY}: total lower bound for k={k} evaluates to "
                         f"{sigma_total_min(n, k)}; the published uppers imply {v}")
    return BoundsReport(n, tuple(rows), tuple(notes))


def stratum_range(k: int) -> tuple[int, int]:
    """Inclusive crossing-number range of stratum ``k``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 0, 0
    return max(3, (2 * k - 1) ** 2), (2 * k + 1) ** 2 - 2


def stratum_of(crossing_number: int) -> int | None:
    """Stratum containing ``crossing_number``, or ``None`` between strata."""
    if crossing_number == 0:
        return 0
    k = 1
    while True:
        lo, hi = stratum_range(k)
        if crossing_number < lo:
            return None
        if crossing_number <= hi:
            return k
        k += 1


@dataclass(frozen=True)
class StratumCheck:
    k: int
    crossing_range: tuple[int, int]
    count: int
    lower: int
    upper: int

    @property
    def passed(self) -> bool:
        return self.lower <= self.count <= self.upper


@dataclass(frozen=True)
class CensusCheck:
    n: int
    strata: tuple[StratumCheck, ...]
    unassignable: int          # counts with no table match
    between_strata: int        # identified, crossing number outside every range
    ambiguous_split: int       # matches spanning several strata

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.strata)

    def to_text(self) -> str:
        lines = []
        for s in self.strata:
            lo, hi = s.crossing_range
            lines.append(f"k={s.k} crossings {lo}..{hi}: {s.count} in [{s.lower}, {s.upper}] "
                         f"{'pass' if s.passed else 'FAIL'}")
        lines.append(f"unassignable (beyond table): {self.unassignable}")
        lines.append(f"identified but between strata: {self.between_strata}")
        if self.ambiguous_split:
            lines.append(f"ambiguous across strata: {self.ambiguous_split}")
        return "\n".join(lines) + "\n"


def check_census(report, b: BoundsReport, table) -> CensusCheck:
    """Sum census counts per stratum and compare with ``b``'s bounds.

    ``report`` is a census whose entries carry identifications against
    ``table``. Failures are reported in the result, never raised.
    """
    if report.n != b.n:
        raise ValueError("census and bounds are for different lattices")
    sums = [0] * (b.n + 1)
    unassignable = between = split = 0
    for entry in report.entries.values():
        ident = entry.identification
        if ident is None or ident.beyond_table:
            unassignable += entry.count
            continue
        strata = {stratum_of(table[name].crossing_number) for name in ident.names}
        if len(strata) > 1:
            split += entry.count
            continue
        k = strata.pop()
        if k is None or k > b.n:
            between += entry.count
        else:
            sums[k] += entry.count
    rows = tuple(StratumCheck(k, stratum_range(k), sums[k], b.rows[k].lower, b.rows[k].upper)
                 for k in range(b.n + 1))
    return CensusCheck(b.n, rows, unassignable, between, split)

import pytest
from hypothesis import given, strategies as st

from latticeknots.bounds import (
    DISCREPANCY, MATCH, MATCH_INTERMEDIATES, PAPER_INTERMEDIATES, bounds_report,
    sigma_min, sigma_total_min, sigma_upper, stratum_of, stratum_range,
)

pairs = st.integers(0, 10).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n)))


def test_hand_values():
    # 4 * 2^6; 9 * (2^16 + 2^12); top stratum is always a single placement
    assert sigma_min(1, 0) == 256
    assert sigma_min(2, 0) == 626_688
    assert sigma_min(2, 1) == 4 * 2 ** 10
    assert sigma_total_min(2, 1) == 6 * 4 * 2 ** 10
    assert sigma_total_min(2, 2) == 16
    assert sigma_upper(1, 0) == 512 - 256 - 6 + 256


@given(pairs)
def test_bounds_are_ordered(nk):
    n, k = nk
    lo, hi = sigma_min(n, k), sigma_upper(n, k)
    assert 0 < lo <= hi <= 2 ** ((2 * n + 1) ** 2)
    assert sigma_total_min(n, k) >= lo


@given(st.integers(0, 10))
def test_totals_fit_the_lattice(n):
    assert sum(sigma_total_min(n, k) for k in range(n + 1)) <= 2 ** ((2 * n + 1) ** 2)
    assert sigma_min(n, n) == 1
    gaps = {sigma_upper(n, k) - sigma_min(n, k) for k in range(n + 1)}
    assert len(gaps) == 1


@pytest.mark.parametrize("n,k", [(-1, 0), (1, 2), (2, -1)])
def test_domain(n, k):
    with pytest.raises(ValueError):
        sigma_min(n, k)
    with pytest.raises(ValueError):
        sigma_upper(n, k)


def test_report_3x3():
    r = bounds_report(1)
    k0, k1 = r.rows
    assert (k0.lower, k0.upper) == (256, 506)
    assert (k0.lower_status, k0.upper_status) == (MATCH, MATCH)
    assert (k1.lower, k1.upper) == (1, 251)
    assert k1.paper_upper == 252 and k1.upper_status == DISCREPANCY


def test_report_5x5():
    r = bounds_report(2)
    k0, k1, k2 = r.rows
    assert k0.lower == 626_688 and k0.lower_status == MATCH
    assert k0.upper_status == DISCREPANCY
    assert k0.upper == 2 ** 25 - 24_592 and k0.upper_paper_intermediates == 2 ** 25 - 6160
    assert k1.lower == 4096 and k1.paper_lower == 1024 and k1.lower_status == DISCREPANCY
    assert k1.upper_status == MATCH_INTERMEDIATES
    assert k2.upper_status == MATCH_INTERMEDIATES
    assert sigma_upper(2, 2, PAPER_INTERMEDIATES) == 2 ** 25 - 632_847
    assert len(r.notes) == 1 and "24576" in r.notes[0]


def test_discrepancy_count():
    flags = sum(row.lower_status == DISCREPANCY for n in (1, 2) for row in bounds_report(n).rows)
    flags += sum(row.upper_status == DISCREPANCY for n in (1, 2) for row in bounds_report(n).rows)
    flags += sum(len(bounds_report(n).notes) for n in (1, 2))
    assert flags == 4


def test_report_formats():
    r = bounds_report(2)
    lines = r.to_csv().splitlines()
    assert lines[0].startswith("k,lower,total_lower,upper")
    assert len(lines) == 4
    text = r.to_text()
    assert "k=0: [626688," in text and "note:" in text
    assert bounds_report(3).rows[0].paper_lower is None
    with pytest.raises(ValueError):
        bounds_report(-1)


def test_strata():
    assert stratum_range(0) == (0, 0)
    assert stratum_range(1) == (3, 7)
    assert stratum_range(2) == (9, 23)
    assert [stratum_of(c) for c in (0, 3, 7, 8, 9, 10)] == [0, 1, 1, None, 2, 2]
    with pytest.raises(ValueError):
        stratum_range(-1)


def test_lower_bound_grows_with_lattice():
    for k in range(10):
        values = [sigma_min(n, k) for n in range(max(k, 1), 11)]
        assert values == sorted(values)

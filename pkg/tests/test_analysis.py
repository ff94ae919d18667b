import json

import numpy as np
import pytest

from latticeknots.analysis import (
    CensusReport, MirrorMode, SampleEstimate, canonicalize, chunk_bits, enumerate_census,
    sample_census, stratify, wilson_interval,
)
from latticeknots.bracket import Engine
from latticeknots.laurent import LaurentPoly

TABLE_3X3 = {"0_1": 312, "3_1": 80, "4_1": 48, "5_2": 48, "6_1": 16, "7_4": 8}


@pytest.fixture(scope="module")
def census3(table):
    return enumerate_census(1, table=table)


def test_single_crossing_census(table):
    r = enumerate_census(0, table=table)
    assert r.total == 2 and r.unknot_count == 2 and r.distinct_count == 1


def test_3x3_census_counts(census3):
    assert census3.total == 512
    assert census3.distinct_count == 10
    assert census3.unknot_count == 312
    for name, count in TABLE_3X3.items():
        assert census3.count_of(name) == count
        if name not in ("0_1", "4_1"):
            assert census3.count_of(name, mirrored=False) == count // 2
            assert census3.count_of(name, mirrored=True) == count // 2


@pytest.mark.property_suite
def test_3x3_census_mirror_symmetry(census3):
    for p, e in census3.entries.items():
        assert census3.entries[p.substitute_inverse()].count == e.count


def test_representatives_reproduce_their_class(census3, diagrams):
    from latticeknots.bracket import jones
    for p, e in census3.entries.items():
        assert jones(diagrams[1], e.representative) == p


def test_folded_census(table, census3):
    folded = enumerate_census(1, table=table, mode="folded")
    assert folded.distinct_count == 6
    assert folded.total == 512
    for p in folded.entries:
        assert canonicalize(p) == p
    assert sorted(e.count for e in folded.entries.values()) == sorted(TABLE_3X3.values())


@pytest.mark.parametrize("engine", [Engine.STATESUM, Engine.PD])
def test_census_engines_agree(table, census3, engine):
    other = enumerate_census(1, engine, table)
    assert {p: e.count for p, e in other.entries.items()} == \
        {p: e.count for p, e in census3.entries.items()}
    assert other.engine == engine.value


@pytest.mark.property_suite
def test_census_independent_of_workers(table, census3):
    for workers in (1, 3):
        r = enumerate_census(1, table=table, workers=workers, free_bits=4)
        assert {p: (e.count, e.representative) for p, e in r.entries.items()} == \
            {p: (e.count, e.representative) for p, e in census3.entries.items()}


def test_checkpoint_resume(tmp_path, table, census3):
    path = tmp_path / "ck.json"
    seen = []

    def stop_early(done, total):
        seen.append(done)
        if done == 10:
            raise KeyboardInterrupt

    with pytest.raises(KeyboardInterrupt):
        enumerate_census(1, table=table, checkpoint=str(path), progress=stop_early, free_bits=3)
    state = json.loads(path.read_text())
    assert len(state["done"]) == 10
    resumed = []
    r = enumerate_census(1, table=table, checkpoint=str(path), free_bits=3,
                         progress=lambda d, t: resumed.append(d))
    assert resumed[0] == 11 and resumed[-1] == 64
    assert {p: e.count for p, e in r.entries.items()} == \
        {p: e.count for p, e in census3.entries.items()}
    with pytest.raises(ValueError, match="different run"):
        enumerate_census(1, table=table, checkpoint=str(path), free_bits=4)


def test_enumerate_rejects_large_lattices():
    with pytest.raises(ValueError, match="sample"):
        enumerate_census(3)
    with pytest.raises(ValueError):
        enumerate_census(-1)
    with pytest.raises(ValueError):
        enumerate_census(1, free_bits=0)


def test_census_outputs(table, census3):
    lines = census3.to_csv(table).splitlines()
    assert lines[0] == "polynomial,count,name,mirrored,type"
    assert lines[1] == "0:1,312,0_1,0,T"
    assert len(lines) == 11
    summary = json.loads(census3.to_json())
    assert summary["unknot_count"] == 312
    assert summary["distinct"] == 10
    assert summary["beyond_table_count"] == 0
    assert summary["format_version"] == 1
    assert abs(summary["unknot_ratio"] - 0.609375) < 1e-12


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and abs((0.5 - lo) - (hi - 0.5)) < 1e-12
    assert wilson_interval(0, 10)[0] == 0.0
    assert wilson_interval(10, 10)[1] == pytest.approx(1.0)
    # textbook value for 81 of 263
    lo, hi = wilson_interval(81, 263)
    assert lo == pytest.approx(0.2553, abs=1e-4) and hi == pytest.approx(0.3662, abs=1e-4)


def test_chunk_bits_substreams():
    a = chunk_bits(7, 0, 100, 25)
    assert a.shape == (100, 25) and a.dtype == np.uint8
    assert np.array_equal(a, chunk_bits(7, 0, 100, 25))
    assert not np.array_equal(a, chunk_bits(7, 1, 100, 25))
    assert not np.array_equal(a, chunk_bits(8, 0, 100, 25))
    # a shorter final chunk is a prefix of the full one
    assert np.array_equal(chunk_bits(7, 3, 10, 25), chunk_bits(7, 3, 100, 25)[:10])


@pytest.mark.property_suite
def test_sampling_is_deterministic(table):
    runs = [sample_census(2, 10_000, 99, table, workers=w) for w in (1, 2, 4)]
    assert len({(r.unknot_count, r.beyond_table_count) for r in runs}) == 1
    other = sample_census(2, 10_000, 100, table)
    assert (other.unknot_count, other.beyond_table_count) != \
        (runs[0].unknot_count, runs[0].beyond_table_count)


def test_sampling_3x3_matches_census(table):
    est = sample_census(1, 20_000, 5, table)
    lo, hi = est.unknot_ci
    assert lo <= 312 / 512 <= hi
    assert est.beyond_table_count == 0


def test_sample_summary(table):
    est = sample_census(1, 100, 3, table)
    s = json.loads(est.to_json())
    for key in ("seed", "generator", "numpy_version", "chunk_size", "unknot_ci95",
                "beyond_table_ci95", "samples", "n"):
        assert key in s
    assert s["samples"] == 100 and s["seed"] == 3
    with pytest.raises(ValueError):
        sample_census(1, 0, 3, table)


def test_stratification(table, census3):
    reports = [enumerate_census(n, table=table, mode="folded") for n in (0, 1)]
    strat = stratify(reports, table)
    assert [e.label for _, e in strat.stratum(0)] == ["0_1"]
    labels = [e.label for _, e in strat.stratum(1)]
    assert labels == ["3_1", "4_1", "5_2", "6_1", "7_4"]
    e = strat.find("3_1")
    assert (e.m, e.index) == (1, 1)
    assert strat[table["5_2"].jones.substitute_inverse()].label == "5_2"
    assert strat.to_csv().splitlines()[0] == "m,l_m,name,polynomial"
    with pytest.raises(ValueError):
        stratify([reports[1]], table)
    with pytest.raises(ValueError):
        stratify([reports[0], census3], table)

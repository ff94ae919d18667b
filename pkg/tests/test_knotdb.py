import io
from pathlib import Path

import pytest

from latticeknots import knotdb
from latticeknots.knotdb import (
    KnotType, TableError, identify, load_table, load_table_file, try_factor,
)
from latticeknots.laurent import LaurentPoly

P = LaurentPoly.parse
MINI = Path(__file__).parent / "data" / "mini_table.csv"

# published small-knot polynomials, one chirality each
PUBLISHED = {
    "0_1": "1",
    "3_1": "q^2+q^6-q^8",
    "4_1": "1 -q^2 - q^-2 + q^4 + q^-4",
    "5_2": "q^2-q^4+2q^6-q^8+q^10-q^12",
    "6_1": "q^-4-q^-2+2-2q^2+q^4-q^6+q^8",
    "7_4": "q^2-2q^4+3q^6-2q^8+3q^10-2q^12+q^14-q^16",
}


def test_bundled_table_shape(table):
    assert len(table) == 250
    assert table.records[0].name == "0_1"
    assert max(r.crossing_number for r in table.records) == 10
    counts = {}
    for r in table.records:
        counts[r.crossing_number] = counts.get(r.crossing_number, 0) + 1
    # prime knots per crossing number
    assert counts == {0: 1, 3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 21, 9: 49, 10: 165}


def test_bundled_invariants(table):
    for r in table.records:
        r.validate()
        assert r.jones.eval_at_one() == 1


def test_torus_knots_in_table(table):
    torus = {r.name for r in table.records if r.knot_type is KnotType.TORUS}
    assert torus == {"0_1", "3_1", "5_1", "7_1", "8_19", "9_1", "10_124"}


@pytest.mark.parametrize("name", sorted(PUBLISHED))
def test_published_polynomials_identify(table, name):
    p = P(PUBLISHED[name])
    ident = identify(p, table)
    assert ident.known and ident.name == name
    mirror = identify(p.substitute_inverse(), table)
    assert mirror.name == name
    if name not in ("0_1", "4_1"):
        assert mirror.mirrored != ident.mirrored


def test_amphichiral_never_mirrored(table):
    ident = identify(P(PUBLISHED["4_1"]), table)
    assert ident.status == "known" and not ident.mirrored


def test_known_collision(table):
    ident = identify(table["5_1"].jones, table)
    assert ident.status == "ambiguous"
    assert set(ident.names) == {"5_1", "10_132"}
    assert ident.name is None
    assert "|" in ident.label
    groups = table.collisions()
    assert any(set(g) == {"5_1", "10_132"} for g in groups)


def test_beyond_table(table):
    ident = identify(P("q^2 + q^4 - q^8 - q^10 + q^12"), table)
    assert ident.beyond_table and ident.label == ""


def test_factor_products(table):
    t = table["3_1"].jones
    granny = t * t
    assert granny == P("q^4+2q^8-2q^10+q^12-2q^14+q^16")
    assert identify(granny, table).beyond_table
    a, b = try_factor(granny, table)
    assert (a.label, b.label) == ("3_1", "3_1")
    a, b = try_factor(t * t.substitute_inverse(), table)
    assert {a.label, b.label} == {"3_1", "3_1^m"}
    assert try_factor(LaurentPoly.one(), table) is None


def test_load_sources_agree():
    raw = MINI.read_bytes()
    a = load_table(raw)
    b = load_table(raw.decode())
    c = load_table(io.BytesIO(raw))
    d = load_table(io.StringIO(raw.decode()))
    e = load_table_file(MINI)
    assert [r.name for r in a.records] == ["0_1", "3_1", "4_1"]
    for t in (b, c, d, e):
        assert t.records == a.records
    assert "3_1" in a and "5_1" not in a
    assert a["4_1"].knot_type is KnotType.HYPERBOLIC


@pytest.mark.parametrize("body,line,fragment", [
    ("3_1,3,T\n", 1, "expected"),
    ("0_1,0,T,0:1\n0_1,0,T,0:1\n", 2, "duplicate"),
    ("3_1,x,T,2:1,0,0,0,1,0,-1\n", 1, "crossing number"),
    ("3_1,3,Z,2:1,0,0,0,1,0,-1\n", 1, "type letter"),
    ("3_1,3,T,q^2+q^6-q^8\n", 1, "min_exp"),
    ("3_1,3,T,2:1,0,0,0,1\n", 1, r"J\(1\)"),
    ("# c\n\nx,1,T,1:1\n", 3, "odd exponents"),
    ("x,1,T,2:a\n", 1, "bad polynomial"),
])
def test_table_errors(body, line, fragment):
    with pytest.raises(TableError, match=fragment) as info:
        load_table(body)
    assert info.value.line == line


def test_type_letters():
    assert [t.letter for t in KnotType] == ["T", "H", "S", "U"]
    assert KnotType.from_letter("S") is KnotType.SATELLITE
    with pytest.raises(ValueError):
        KnotType.from_letter("Q")


def test_table_env_override(monkeypatch):
    monkeypatch.setenv(knotdb.TABLE_ENV, str(MINI))
    assert knotdb.default_table_path() == str(MINI)
    assert len(knotdb.default_table()) == 3
    monkeypatch.delenv(knotdb.TABLE_ENV)
    assert len(knotdb.default_table()) == 250

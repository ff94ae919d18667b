"""Build the bundled knot table from a KnotInfo CSV export.

    python tools/build_knot_table.py knotinfo_data_complete.csv \
        src/latticeknots/data/knots10.csv

The KnotInfo export (shipped in the ``database_knotinfo`` package) is
``|``-separated with a header row followed by a description row. Jones
polynomials there are in ``t``; the table stores them in ``q`` with
``t = q^2``. Every record is re-derived from its PD code with the
package's own state sum before it is written, so a sign or variable
mix-up in either source shows up here rather than in a census.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from latticeknots.bracket import bracket_pd, bracket_to_jones
from latticeknots.lattice import PDCrossing, PlanarDiagram, pd_signs
from latticeknots.laurent import LaurentPoly

MAX_CROSSINGS = 10


def _pd(text: str) -> PlanarDiagram:
    xs = tuple(PDCrossing(*x) for x in json.loads(text))
    return PlanarDiagram(xs, tuple((0, 0) for _ in range(2 * len(xs))))


def _type_letter(name: str, volume: str) -> str:
    # the unknot is the trivial torus knot; volume is empty for it
    v = float(volume or 0)
    return "T" if v == 0 else "H"


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source")
    ap.add_argument("dest")
    args = ap.parse_args(argv)

    csv.field_size_limit(1 << 30)
    with open(args.source, encoding="utf-8", errors="replace", newline="") as f:
        rows = csv.reader(f, delimiter="|")
        header = next(rows)
        col = {name: i for i, name in enumerate(header)}
        records = []
        for row in rows:
            cn = row[col["crossing_number"]]
            if not cn.isdigit() or int(cn) > MAX_CROSSINGS:
                continue
            name = row[col["name"]]
            jt = LaurentPoly.parse(row[col["jones_polynomial"]], var="t")
            jq = jt.substitute_power(2)
            if int(cn) > 0:
                pd = _pd(row[col["pd_notation"]])
                derived = bracket_to_jones(bracket_pd(pd), sum(pd_signs(pd)))
                if derived != jq:
                    print(f"{name}: PD gives {derived}, listed {jq}", file=sys.stderr)
                    return 1
            records.append((int(cn), name, _type_letter(name, row[col["volume"]]), jq))

    with open(args.dest, "w", encoding="utf-8", newline="\n") as out:
        out.write("# Prime knots up to 10 crossings, one chirality each.\n")
        out.write("# Source: KnotInfo (database_knotinfo export). Jones in q with t = q^2.\n")
        out.write("# type: T torus (the unknot counts as the trivial torus knot), H hyperbolic\n")
        out.write("# name,crossing_number,type_letter,polynomial\n")
        for cn, name, letter, jq in records:
            out.write(f"{name},{cn},{letter},{jq.to_machine()}\n")
    print(f"wrote {len(records)} records to {args.dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

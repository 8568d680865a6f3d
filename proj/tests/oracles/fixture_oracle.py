"""Recomputes the frozen values the tests compare against.

Reads the bundled labeled fixture with nothing but the standard library and
mpmath, and prints the JSON stored in tests/data/labeled_fixture_oracle.json.
"""
import collections
import json
import pathlib
import sys
from fractions import Fraction

import mpmath

HERE = pathlib.Path(__file__).resolve().parent
FIXTURE = HERE.parent / "data" / "labeled_fixture.jsonl"


def sentence_counts(path):
    counts = collections.Counter()
    for line in path.open():
        record = json.loads(line)
        for s in record["sentences"]:
            if s["emotion"] != "neutral":
                counts[s["emotion"]] += 1
    return counts


def main():
    counts = sentence_counts(FIXTURE)
    total = sum(counts.values())
    top8 = sum(sorted(counts.values(), reverse=True)[:8])
    mpmath.mp.dps = 40
    phi = lambda z: mpmath.ncdf(z)
    out = {
        "fixture": FIXTURE.name,
        "sentence_total": total,
        "top8_numerator": top8,
        "top8_share": float(Fraction(top8, total)),
        "phi": {
            "1.959964": float(phi(mpmath.mpf("1.959964"))),
            "-8": float(phi(-8)),
            "0.5": float(phi(mpmath.mpf("0.5"))),
            "-3.2": float(phi(mpmath.mpf("-3.2"))),
        },
        "two_sided_p": {
            "30": float(2 * phi(-30)),
        },
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()

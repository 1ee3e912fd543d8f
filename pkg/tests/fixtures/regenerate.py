"""Rewrite the golden files in v1/ from the current implementation.

Run only after the values have been checked independently; the test suite
compares against whatever is stored here.
"""

import json
from fractions import Fraction
from pathlib import Path

from qcohom.residues import ClassSpec, dh_density, pairing
from qcohom.ring import ring_presentation

OUT = Path(__file__).parent / "v1"


def dump(name, data):
    (OUT / name).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    for r in (1, 2, 3):
        dump(f"ring_r{r}.json", ring_presentation(r).to_json(sigma=True))
    for r in (2, 3):
        dump(f"dh_r{r}.json", dh_density(r).to_json())
    res = pairing(3, ClassSpec(1, 3), (Fraction(1, 10), Fraction(1, 5), Fraction(3, 5)), symbolic=True)
    dump("mixed_r3_a1_b3.json", {"cell": res.cell.key(), "chamber": res.chamber.name, "total": res.value.to_text()})


if __name__ == "__main__":
    main()

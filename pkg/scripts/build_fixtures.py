#!/usr/bin/env python3
"""Regenerate src/watkins/fixtures/curves.jsonl from the table below.

The table is the source of truth for the shipped fixture curves.
a-invariants, conductors, and torsion structures are standard catalog
data and every recomputable column is re-verified by the test suite;
moddeg/manin entries are only present where they are forced (levels
whose modular curve has genus one, where the optimal quotient is an
isomorphism, plus the classical degree-2 case at level 37).
"""

import sys
from pathlib import Path

SRC = Path(__file__).resolve().parent.parent / "src"
sys.path.insert(0, str(SRC))

from watkins.data import CurveDataRow, row_to_line  # noqa: E402

# label, ainvs, conductor, moddeg, manin, rank, torsion_structure
TABLE = [
    ("11a1", (0, -1, 1, -10, -20), 11, 1, 1, 0, (5,)),
    ("11a2", (0, -1, 1, -7820, -263580), 11, None, None, 0, ()),
    ("11a3", (0, -1, 1, 0, 0), 11, None, None, 0, (5,)),
    ("14a1", (1, 0, 1, 4, -6), 14, 1, 1, 0, (6,)),
    ("15a1", (1, 1, 1, -10, -10), 15, 1, 1, 0, None),
    ("15a8", (1, 1, 1, 0, 0), 15, None, None, 0, None),
    ("17a1", (1, -1, 1, -1, -14), 17, 1, 1, 0, (4,)),
    ("19a1", (0, 1, 1, -9, -15), 19, 1, 1, 0, (3,)),
    ("20a1", (0, 1, 0, 4, 4), 20, 1, 1, 0, None),
    ("24a1", (0, -1, 0, -4, 4), 24, 1, 1, 0, None),
    ("26a1", (1, 0, 1, -5, -8), 26, None, None, 0, None),
    ("27a1", (0, 0, 1, 0, -7), 27, 1, 1, 0, None),
    ("27a3", (0, 0, 1, 0, 0), 27, None, None, 0, (3,)),
    ("32a1", (0, 0, 0, 4, 0), 32, 1, 1, 0, (4,)),
    ("32a2", (0, 0, 0, -1, 0), 32, None, None, 0, (2, 2)),
    ("36a1", (0, 0, 0, 0, 1), 36, 1, 1, 0, (6,)),
    ("37a1", (0, 0, 1, -1, 0), 37, 2, 1, 1, ()),
    ("37b1", (0, 1, 1, -23, -50), 37, None, None, 0, None),
    ("49a1", (1, -1, 0, -2, -1), 49, 1, 1, 0, (2,)),
    ("121b1", (0, -1, 1, -7, 10), 121, None, None, None, None),
    ("256a1", (0, 1, 0, -3, 1), 256, None, None, None, (2,)),
]


def main() -> None:
    out = SRC / "watkins" / "fixtures" / "curves.jsonl"
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for label, ainvs, conductor, moddeg, manin, rank, torsion in TABLE:
        row = CurveDataRow(
            label=label,
            ainvs=ainvs,
            conductor=conductor,
            moddeg=moddeg,
            manin=manin,
            rank=rank,
            torsion_structure=torsion,
            source="builtin",
            fetched_at=None,
        )
        lines.append(row_to_line(row))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} rows to {out}")


if __name__ == "__main__":
    main()

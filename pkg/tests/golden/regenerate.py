"""Rewrite the golden tables.  Run only after a build has been verified:

    python tests/golden/regenerate.py
"""

import math
from pathlib import Path

from octwalk.cli import main

HERE = Path(__file__).parent
LATTICES = {"regular": (2 ** -0.25, math.pi / 4), "skewed": (0.8, math.pi / 3), "narrow": (0.9, math.pi / 8)}

if __name__ == "__main__":
    for name, (a, alpha) in LATTICES.items():
        main(["tau", "--a", repr(a), "--alpha", repr(alpha), "--n", "5", "--dq", "0.25", "--out", str(HERE / f"tau_{name}")])
    main(["compare", "--n", "5", "--dq", "0.25", "--out", str(HERE / "compare_skewed")])

#!/usr/bin/env python3
"""Run every property suite at full scale and print one summary line each.

Mirrors `stablemods verify all` but with the acceptance-level case counts
pinned explicitly, so the output doubles as a quick health report.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stablemods.verify import run_suite

SCALES = {
    "oracle": 500,
    "module-theorem": 200,
    "join-algebra": 200,
    "dlp": 200,
    "incremental": 100,
    "projection": 1000,
    "splitting": 50,
}


def main() -> int:
    failed = False
    for name, count in SCALES.items():
        result = run_suite(name, count=count)
        print(result.summary())
        for failure in result.failures[:5]:
            print("   ", failure)
        failed = failed or not result.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run the full two-leg evidence experiment and write theorem1.json.

Usage: python scripts/run_theorem1.py [output-dir]
"""

import sys
import time
from pathlib import Path

from speiserlab.theorem1 import Theorem1Config, run_theorem1


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    out_dir.mkdir(parents=True, exist_ok=True)
    config = Theorem1Config()
    t0 = time.time()
    report = run_theorem1(config)
    elapsed = time.time() - t0
    path = out_dir / "theorem1.json"
    path.write_text(report.to_json())
    print(f"wrote {path} in {elapsed:.1f}s")
    for key, verdict in sorted(report.verdicts.items()):
        print(f"  {key}: {verdict}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

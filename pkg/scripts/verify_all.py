"""Run the full verification matrix and write one JSON report per criterion.

    python3 scripts/verify_all.py --out results/
"""
import argparse
import json
import sys
from pathlib import Path

from lsiverify import suites


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    all_ok = True
    for k, (name, fn) in suites.CRITERIA.items():
        if args.only and k not in args.only:
            continue
        report = fn()
        all_ok &= report.ok
        (out / f"criterion_{k}.json").write_text(report.to_json() + "\n")
        print(f"criterion {k} ({name}): {'PASS' if report.ok else 'FAIL'} "
              f"{json.dumps(report.counts())} {report.wall_time:.1f}s")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Full record search over the normalized F_5 family, genus 3..13.

    python scripts/run_search_q5.py [--workers N] [--out best.jsonl]

Prints the ledger TSV and the time taken; the best witnesses can be
re-checked with `manypoints verify best.jsonl`.
"""

import argparse
import sys
import time

from manypoints.enumeration import CurveFamilySpec, enumerate_curves
from manypoints.field import field_for_order
from manypoints.paper import bounds
from manypoints.search import SearchOptions, run_search, write_witnesses


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--genus-min", type=int, default=3)
    ap.add_argument("--genus-max", type=int, default=13)
    ap.add_argument("--out")
    args = ap.parse_args()

    B = bounds()
    spec = CurveFamilySpec.default_for(field_for_order(5))
    opts = SearchOptions(genus_min=args.genus_min, genus_max=args.genus_max, workers=args.workers)
    t0 = time.perf_counter()
    ledger = run_search(enumerate_curves(spec), B, opts)
    sys.stdout.write(ledger.report(B))
    print(f"{ledger.curves_seen} models, {ledger.curves_analyzed} analysed, {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    if args.out:
        write_witnesses(args.out, ledger.witnesses())


if __name__ == "__main__":
    main()

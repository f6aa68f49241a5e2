"""Genus 5 and 6 table rows for q = 7, 11, 13 from the shipped spot-check fixture.

    python scripts/table_spotcheck.py [--q 7] [--workers N]
"""

import argparse

from manypoints.paper import check_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, choices=[7, 11, 13])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    results = check_table(args.q, workers=args.workers)
    for r in results:
        print(r.line())
    raise SystemExit(0 if all(r.ok for r in results) else 1)


if __name__ == "__main__":
    main()

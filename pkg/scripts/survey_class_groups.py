"""Distribution of class numbers and group structures over a curve family.

    python scripts/survey_class_groups.py --q 7 [--family odd_char_deg5] [--sample 0.2 --seed 1]

Prints one TSV row per structure: count, class number, structure, and the
share of models whose group is cyclic.
"""

import argparse
from collections import Counter

from manypoints.enumeration import MODES, CurveFamilySpec, enumerate_curves
from manypoints.field import field_for_order
from manypoints.jacobian import enumerate_class_group


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, required=True)
    ap.add_argument("--family", choices=[m for m in MODES if m != "explicit_list"])
    ap.add_argument("--sample", type=float)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    F = field_for_order(args.q)
    kw = {"sample": args.sample, "seed": args.seed}
    spec = CurveFamilySpec(F, args.family, **kw) if args.family else CurveFamilySpec.default_for(F, **kw)
    tally = Counter()
    for m in enumerate_curves(spec):
        tally[enumerate_class_group(m).invariants] += 1
    total = sum(tally.values())
    print("count\th\tstructure")
    for inv, n in sorted(tally.items(), key=lambda kv: (-kv[1], kv[0])):
        h = 1
        for d in inv:
            h *= d
        print(f"{n}\t{h}\t{' x '.join(f'Z/{d}' for d in inv) or 'trivial'}")
    cyclic = sum(n for inv, n in tally.items() if len(inv) <= 1)
    print(f"# {total} models, {cyclic / max(total, 1):.1%} cyclic")


if __name__ == "__main__":
    main()

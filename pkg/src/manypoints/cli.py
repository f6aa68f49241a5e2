"""Command-line entry point: ``manypoints <command> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
import time

from .abgroup import all_subgroups
from .curve import CurveModel, InvalidModelError, count_points_ext, find_place, l_polynomial, places_of_degree, rational_places
from .enumeration import MODES, CurveFamilySpec, enumerate_curves
from .field import FieldError, parse_field_spec
from .jacobian import enumerate_class_group
from .search import (
    BoundsTable,
    SearchOptions,
    check_witness,
    covers_for_curve,
    read_witnesses,
    run_search,
    witness_from_places,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _field(args):
    if args.q is None:
        raise UsageError("--q is required")
    spec = f"q={args.q}" + (f";mod={args.mod}" if args.mod else "")
    return parse_field_spec(spec)


def _model(args) -> CurveModel:
    if args.curve:
        if args.f or args.h:
            raise UsageError("give either --curve or --q/--h/--f, not both")
        return CurveModel.parse(args.curve)
    if not args.f:
        raise UsageError("a curve is required: --curve TEXT or --q Q --f F [--h H]")
    F = _field(args)
    model = CurveModel.from_strings(F, args.h, args.f)
    return model


def _out(args):
    if getattr(args, "out", None):
        return open(args.out, "w")
    return contextlib.nullcontext(sys.stdout)


def _window(args) -> SearchOptions:
    if args.genus_min > args.genus_max:
        raise UsageError("--genus-min exceeds --genus-max")
    if args.genus_min < 2:
        raise UsageError("--genus-min must be at least 2")
    return SearchOptions(
        genus_min=args.genus_min,
        genus_max=args.genus_max,
        min_split=args.min_split,
        workers=args.workers,
    )


# -- commands -----------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    m = _model(args)
    cg = enumerate_class_group(m)
    a1, a2 = l_polynomial(m)
    fields = [
        ("N1", count_points_ext(m, 1)),
        ("N2", count_points_ext(m, 2)),
        ("deg2", places_of_degree(m, 2)),
        ("a1", a1),
        ("a2", a2),
        ("h", cg.order),
        ("structure", cg.structure),
    ]
    print("\t".join(f"{k}={v}" for k, v in fields))
    return EXIT_OK


def cmd_places(args) -> int:
    m = _model(args)
    F = m.field
    for pl in rational_places(m):
        x = "inf" if pl.at_infinity else F.format(pl.x)
        print(f"{pl.label}\t{pl.kind}\tx={x}\ty={F.format(pl.y)}")
    return EXIT_OK


def cmd_classgroup(args) -> int:
    m = _model(args)
    cg = enumerate_class_group(m)
    print(cg.summary())
    for d, g in zip(cg.invariants, cg.generators):
        print(f"generator\tZ/{d}\t{cg.format(g)}")
    if args.elements:
        for c in cg.elements:
            vec = ",".join(map(str, cg.to_vector(c)))
            print(f"element\t{cg.format(c)}\t({vec})")
    return EXIT_OK


def cmd_subgroups(args) -> int:
    m = _model(args)
    cg = enumerate_class_group(m)
    print("index\torder\tgenerators")
    for G in all_subgroups(cg.structure):
        if args.index is not None and G.index != args.index:
            continue
        gens = "; ".join(cg.format(cg.from_vector(g)) for g in G.generators()) or "-"
        print(f"{G.index}\t{G.order}\t{gens}")
    return EXIT_OK


def cmd_covers(args) -> int:
    m = _model(args)
    if args.gen_places:
        if not args.place:
            raise UsageError("--gen-places needs --place")
        labels = [s.strip() for s in args.gen_places.split(";") if s.strip()]
        witnesses = [witness_from_places(m, args.place, labels)]
    else:
        opts = _window(args)
        if args.place:
            opts = SearchOptions(opts.genus_min, opts.genus_max, opts.min_split, base_places=(find_place(m, args.place).label,))
        witnesses = covers_for_curve(m, opts)
    with _out(args) as fh:
        for w in witnesses:
            fh.write(w.to_json() + "\n")
    return EXIT_OK


def cmd_search(args) -> int:
    F = _field(args)
    opts = _window(args)
    if args.curves:
        spec = CurveFamilySpec.from_file(F, args.curves)
    elif args.family:
        spec = CurveFamilySpec(F, args.family, sample=args.sample, seed=args.seed)
    else:
        spec = CurveFamilySpec.default_for(F, sample=args.sample, seed=args.seed)
    bounds = BoundsTable.from_csv(args.bounds) if args.bounds else _default_bounds()
    t0 = time.perf_counter()

    def progress(ledger):
        best = " ".join(f"g{g}:{r.N}" for g, r in sorted(ledger.best.items()))
        print(
            f"[{time.perf_counter() - t0:7.1f}s] curves={ledger.curves_seen} analyzed={ledger.curves_analyzed} {best}",
            file=sys.stderr,
        )

    ledger = run_search(enumerate_curves(spec), bounds, opts, progress=progress if args.progress else None)
    sys.stdout.write(ledger.report(bounds))
    if args.out:
        with open(args.out, "w") as fh:
            for w in ledger.witnesses():
                fh.write(w.to_json() + "\n")
    print(f"searched {ledger.curves_seen} curves in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return EXIT_OK


def _default_bounds() -> BoundsTable:
    from .paper import bounds

    return bounds()


def cmd_verify(args) -> int:
    witnesses = read_witnesses(args.file)
    failed = 0
    for i, w in enumerate(witnesses, 1):
        res = check_witness(w)
        if res.ok:
            print(f"PASS\t{i}\t{w.summary()}")
        else:
            failed += 1
            print(f"FAIL\t{i}\t{w.summary()}\t{'; '.join(res.mismatches)}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify_paper(args) -> int:
    from .paper import run_checks

    only = [s.strip() for s in args.only.split(",")] if args.only else None
    try:
        results = run_checks(only, echo=print)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    bad = [r for r in results if not r.ok]
    print(f"{len(results) - len(bad)}/{len(results)} checks passed")
    return EXIT_FAIL if bad else EXIT_OK


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="manypoints", description="Curves with many points from genus-2 class groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def curve_flags(sp):
        sp.add_argument("--curve", help="curve text, e.g. 'q=2; h=x; f=x^5+x^3+x^2+x'")
        sp.add_argument("--q", type=int, help="field order")
        sp.add_argument("--mod", help="modulus of F_q over F_p in the generator a, e.g. 'a^4+a+1'")
        sp.add_argument("--h", help="h(x) (characteristic 2)")
        sp.add_argument("--f", help="f(x)")

    def window_flags(sp):
        sp.add_argument("--genus-min", type=int, default=3)
        sp.add_argument("--genus-max", type=int, default=50)
        sp.add_argument("--min-split", type=int, default=2)
        sp.add_argument("--workers", type=int, default=1)

    for name, helptext in [
        ("analyze", "point counts, L-polynomial, class number and group structure"),
        ("places", "rational places with their labels"),
        ("classgroup", "class group structure and generators"),
        ("subgroups", "every subgroup of the class group"),
        ("covers", "cover witnesses (JSON lines)"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        curve_flags(sp)
        if name == "classgroup":
            sp.add_argument("--elements", action="store_true", help="also list every class with its vector")
        if name == "subgroups":
            sp.add_argument("--index", type=int, help="only subgroups of this index")
        if name == "covers":
            sp.add_argument("--place", help="base place O")
            sp.add_argument("--gen-places", help="';'-separated places whose differences with O generate G")
            sp.add_argument("--out", help="write witnesses here instead of stdout")
            window_flags(sp)

    sp = sub.add_parser("search", help="record search over a curve family")
    sp.add_argument("--q", type=int)
    sp.add_argument("--mod")
    sp.add_argument("--family", choices=[m for m in MODES if m != "explicit_list"])
    sp.add_argument("--curves", help="file of curve texts (explicit list)")
    sp.add_argument("--bounds", help="bounds CSV (default: shipped fixture)")
    sp.add_argument("--sample", type=float, help="keep each candidate model with this probability")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the best witnesses (JSON lines) here")
    sp.add_argument("--progress", action="store_true", help="progress lines on stderr")
    window_flags(sp)

    sp = sub.add_parser("verify", help="re-check every witness in a JSON-lines file")
    sp.add_argument("file")

    sp = sub.add_parser("verify-paper", help="run the reproduction checks")
    sp.add_argument("--only", help="comma-separated groups: ex1, ex2, q16, q9, q5, table")
    return p


COMMANDS = {
    "analyze": cmd_analyze,
    "places": cmd_places,
    "classgroup": cmd_classgroup,
    "subgroups": cmd_subgroups,
    "covers": cmd_covers,
    "search": cmd_search,
    "verify": cmd_verify,
    "verify-paper": cmd_verify_paper,
}


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time."""

    def emit(self, record):
        self.stream = sys.stderr
        super().emit(record)


def _setup_logging():
    root = logging.getLogger()
    if not any(isinstance(h, _StderrHandler) for h in root.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
        root.addHandler(handler)
    if root.level > logging.WARNING or root.level == logging.NOTSET:
        root.setLevel(logging.WARNING)


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidModelError, FieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

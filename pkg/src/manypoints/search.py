"""Unramified abelian covers from subgroups of Cl(F), and the record search.

For a rational place O and a subgroup G of the class group, the class field
F_O^G is unramified of degree d = [Cl : G] over F, so it has genus d + 1, and
a rational place P of F splits completely in it exactly when [P - O] lies in
G.  Every split place contributes d rational places upstairs.
"""

from __future__ import annotations

import csv
import json
import logging
import multiprocessing as mp
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from . import poly as P
from .abgroup import Subgroup, all_subgroups, subgroup_generated
from .curve import CurveModel, Place, class_number, count_points_ext, find_place, rational_places
from .field import parse_field_spec
from .jacobian import ClassGroup, enumerate_class_group

log = logging.getLogger(__name__)

BASE_GENUS = 2


def genus_of_cover(d: int, g: int = BASE_GENUS) -> int:
    if d < 1 or g < 1:
        raise ValueError("need d >= 1 and g >= 1")
    return d * (g - 1) + 1


@dataclass(frozen=True)
class SearchOptions:
    genus_min: int = 3
    genus_max: int = 50
    min_split: int = 2
    min_points: int = 0
    base_places: tuple[str, ...] | None = None  # restrict O; None means every rational place
    workers: int = 1
    chunk_size: int = 64

    def degree_window(self) -> range:
        return range(max(1, self.genus_min - 1), self.genus_max)

    def accepts(self, d: int, m: int) -> bool:
        genus = genus_of_cover(d)
        return self.genus_min <= genus <= self.genus_max and m >= self.min_split and d * m >= self.min_points


# -- images of rational places ----------------------------------------------------


@dataclass(frozen=True)
class PlaceImageSet:
    base: str
    entries: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def labels(self) -> list[str]:
        return [lab for lab, _ in self.entries]

    def vector(self, label: str) -> tuple[int, ...]:
        return dict(self.entries)[label]


def images(model: CurveModel, cg: ClassGroup, O: Place | str) -> PlaceImageSet:
    """I_O: the class of [P - O] for every rational place P, in place order."""
    if isinstance(O, str):
        O = find_place(model, O)
    entries = tuple((pl.label, cg.to_vector(cg.place_difference(pl, O))) for pl in rational_places(model))
    if len({v for _, v in entries}) != len(entries):
        raise ArithmeticError(f"two rational places share a class on {model.text()}")
    return PlaceImageSet(O.label, entries)


# -- witnesses ---------------------------------------------------------------------

_FIELDS = ("q", "modulus", "h", "f", "O", "M", "subgroup_gens", "d", "genus", "N", "split_places")


@dataclass(frozen=True)
class CoverWitness:
    q: int
    modulus: str | None
    h: str
    f: str
    O: str
    M: tuple[str, ...]
    subgroup_gens: tuple[str, ...]
    d: int
    genus: int
    N: int
    split_places: tuple[str, ...]

    def model(self) -> CurveModel:
        spec = f"q={self.q}" + (f";mod={self.modulus}" if self.modulus else "")
        F = parse_field_spec(spec)
        return CurveModel.from_strings(F, self.h or None, self.f)

    def to_json(self) -> str:
        obj = {}
        for name in _FIELDS:
            val = getattr(self, name)
            obj[name] = list(val) if isinstance(val, tuple) else val
        return json.dumps(obj)

    @classmethod
    def from_json(cls, line: str) -> "CoverWitness":
        obj = json.loads(line)
        missing = [k for k in _FIELDS if k not in obj]
        if missing:
            raise ValueError(f"witness lacks fields {missing}")
        kw = {k: tuple(obj[k]) if isinstance(obj[k], list) else obj[k] for k in _FIELDS}
        return cls(**kw)

    def summary(self) -> str:
        return f"d={self.d} genus={self.genus} N={self.N}"


def _make_witness(model: CurveModel, cg: ClassGroup, O: str, M, G: Subgroup, split) -> CoverWitness:
    F = model.field
    gens = tuple(cg.format(cg.from_vector(g)) for g in G.generators())
    return CoverWitness(
        q=F.q,
        modulus=F.modulus_text(),
        h=P.format_poly(F, model.h) if model.h else "",
        f=P.format_poly(F, model.f),
        O=O,
        M=tuple(M),
        subgroup_gens=gens,
        d=G.index,
        genus=genus_of_cover(G.index),
        N=G.index * len(split),
        split_places=tuple(split),
    )


def witness_from_places(model: CurveModel, O: str, M: Iterable[str]) -> CoverWitness:
    """Witness for G = <[P - O] : P in M>."""
    cg = enumerate_class_group(model)
    img = images(model, cg, O)
    O = img.base
    M = [find_place(model, lab).label for lab in M]
    G = subgroup_generated(cg.structure, [img.vector(lab) for lab in M])
    split = [lab for lab, v in img.entries if G.contains(v)]
    return _make_witness(model, cg, O, M, G, split)


def covers_for_curve(model: CurveModel, options: SearchOptions = SearchOptions()) -> list[CoverWitness]:
    """One witness per (O, G) passing the option filters; M is the split set."""
    places = rational_places(model)
    if not places:
        return []
    cg = enumerate_class_group(model)
    window = options.degree_window()
    subgroups = [G for G in all_subgroups(cg.structure) if G.index in window]
    out = []
    for O in places:
        if options.base_places is not None and O.label not in options.base_places:
            continue
        img = images(model, cg, O)
        for G in subgroups:
            split = [lab for lab, v in img.entries if G.contains(v)]
            if options.accepts(G.index, len(split)):
                out.append(_make_witness(model, cg, O.label, split, G, split))
    return out


@dataclass
class VerificationResult:
    ok: bool
    mismatches: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_witness(w: CoverWitness) -> VerificationResult:
    """Recompute every field of a witness from the curve alone."""
    bad = []
    try:
        model = w.model()
        cg = enumerate_class_group(model)
        img = images(model, cg, w.O)
        if w.subgroup_gens:
            G = subgroup_generated(cg.structure, [cg.to_vector(cg.parse(t)) for t in w.subgroup_gens])
        else:
            G = subgroup_generated(cg.structure, [img.vector(find_place(model, lab).label) for lab in w.M])
    except (ValueError, ArithmeticError, KeyError) as exc:
        return VerificationResult(False, [f"setup: {exc}"])
    split = tuple(lab for lab, v in img.entries if G.contains(v))
    for lab in w.M:
        try:
            ok = find_place(model, lab).label in split
        except ValueError as exc:
            bad.append(f"M: {exc}")
            continue
        if not ok:
            bad.append(f"M: {lab} does not split")
    expect = {
        "d": G.index,
        "genus": genus_of_cover(G.index),
        "N": G.index * len(split),
        "split_places": split,
    }
    for key, val in expect.items():
        if getattr(w, key) != val:
            bad.append(f"{key}: stated {getattr(w, key)!r}, recomputed {val!r}")
    return VerificationResult(not bad, bad)


def verify_witness(w: CoverWitness) -> bool:
    return check_witness(w).ok


def read_witnesses(path: str | Path) -> list[CoverWitness]:
    lines = Path(path).read_text().splitlines()
    return [CoverWitness.from_json(s) for s in lines if s.strip()]


def write_witnesses(path: str | Path, witnesses: Iterable[CoverWitness]) -> None:
    Path(path).write_text("".join(w.to_json() + "\n" for w in witnesses))


# -- bounds and ledger --------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    lower: int | None
    upper: int | None


class BoundsTable:
    def __init__(self, rows: dict[tuple[int, int], Bound] | None = None):
        self.rows = dict(rows or {})
        for (q, g), b in self.rows.items():
            if b.lower is not None and b.upper is not None and b.lower > b.upper:
                raise ValueError(f"lower bound exceeds upper bound at q={q}, genus={g}")

    @classmethod
    def from_csv(cls, path: str | Path) -> "BoundsTable":
        rows = {}
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                cell = lambda k: int(rec[k]) if rec[k].strip() else None  # noqa: E731
                rows[(int(rec["q"]), int(rec["genus"]))] = Bound(cell("lower"), cell("upper"))
        return cls(rows)

    def get(self, q: int, genus: int) -> Bound | None:
        return self.rows.get((q, genus))


IMPROVES = "improves_lower_bound"
MANY_POINTS = "meets_many_points_criterion"
ORDINARY = "ordinary"


def meets_many_points(N: int, upper: int) -> bool:
    """N > b / sqrt(2), in integers."""
    return 2 * N * N > upper * upper


def classify(N: int, bound: Bound | None) -> str:
    if bound is None:
        return ORDINARY
    if bound.lower is not None and N > bound.lower:
        return IMPROVES
    if bound.upper is not None and meets_many_points(N, bound.upper):
        return MANY_POINTS
    return ORDINARY


@dataclass(frozen=True)
class Record:
    genus: int
    N: int
    key: tuple  # (curve index, O index, subgroup index); smaller wins ties
    witness: CoverWitness

    def beats(self, other: "Record | None") -> bool:
        return other is None or (self.N, _neg(self.key)) > (other.N, _neg(other.key))


def _neg(key):
    return tuple(-k for k in key)


class RecordLedger:
    """Best cover per genus.  Merge keeps the larger N, then the smaller key."""

    def __init__(self):
        self.best: dict[int, Record] = {}
        self.curves_seen = 0
        self.curves_analyzed = 0

    def offer(self, rec: Record) -> bool:
        if rec.beats(self.best.get(rec.genus)):
            self.best[rec.genus] = rec
            return True
        return False

    def merge(self, other: "RecordLedger") -> "RecordLedger":
        out = RecordLedger()
        for led in (self, other):
            for rec in led.best.values():
                out.offer(rec)
        out.curves_seen = self.curves_seen + other.curves_seen
        out.curves_analyzed = self.curves_analyzed + other.curves_analyzed
        return out

    def best_n(self, genus: int) -> int:
        rec = self.best.get(genus)
        return rec.N if rec else 0

    def classification(self, genus: int, bounds: BoundsTable, q: int) -> str:
        rec = self.best[genus]
        bound = bounds.get(q, genus)
        if bound is None:
            log.warning("no bounds row for q=%d genus=%d; classifying as ordinary", q, genus)
        return classify(rec.N, bound)

    def report(self, bounds: BoundsTable) -> str:
        lines = ["genus\tbest_N\tclassification\twitness_ref"]
        for g in sorted(self.best):
            rec = self.best[g]
            w = rec.witness
            ref = f"{w.model().text()}; O={w.O}; d={w.d}"
            lines.append(f"{g}\t{rec.N}\t{self.classification(g, bounds, w.q)}\t{ref}")
        return "\n".join(lines) + "\n"

    def witnesses(self) -> list[CoverWitness]:
        return [self.best[g].witness for g in sorted(self.best)]

    def __len__(self):
        return len(self.best)


# -- the search loop ----------------------------------------------------------------


def _best_covers(index: int, model: CurveModel, options: SearchOptions, ledger: RecordLedger) -> None:
    """Offer the best (O, G) per genus of one curve to the ledger.

    A curve is skipped before its class group is built when no degree d in the
    window can reach the ledger's current best: N = d*m <= min(d*N1, h).
    """
    ledger.curves_seen += 1
    n1 = count_points_ext(model, 1)
    if n1 < options.min_split:
        return
    h = class_number(model)
    window = options.degree_window()
    hopeful = [d for d in window if h % d == 0 and min(d * n1, h) >= max(ledger.best_n(d + 1), options.min_points, 1)]
    if not hopeful:
        return
    ledger.curves_analyzed += 1
    cg = enumerate_class_group(model)
    places = rational_places(model)
    allowed = [i for i, O in enumerate(places) if options.base_places is None or O.label in options.base_places]
    base = places[0]
    vecs = [cg.to_vector(cg.place_difference(pl, base)) for pl in places]
    for gi, G in enumerate(all_subgroups(cg.structure)):
        d = G.index
        if d not in hopeful:
            continue
        # places P, O with [P - O] in G are those in the same coset of G
        classes: dict[tuple, list[int]] = {}
        for i, v in enumerate(vecs):
            classes.setdefault(G.coset_key(v), []).append(i)
        best = None
        for members in classes.values():
            o_choices = [i for i in members if i in allowed]
            if not o_choices:
                continue
            cand = (len(members), -o_choices[0])
            if best is None or cand > best[0]:
                best = (cand, members, o_choices[0])
        if best is None:
            continue
        m = len(best[1])
        if not options.accepts(d, m):
            continue
        rec_key = (index, best[2], gi)
        genus = genus_of_cover(d)
        current = ledger.best.get(genus)
        if current is not None and (d * m, _neg(rec_key)) <= (current.N, _neg(current.key)):
            continue
        split = [places[i].label for i in best[1]]
        w = _make_witness(model, cg, places[best[2]].label, split, G, split)
        ledger.offer(Record(genus, w.N, rec_key, w))


def _search_chunk(args) -> RecordLedger:
    chunk, options = args
    ledger = RecordLedger()
    for index, model in chunk:
        _best_covers(index, model, options, ledger)
    return ledger


def _chunks(curves: Iterable[CurveModel], size: int) -> Iterator[list[tuple[int, CurveModel]]]:
    chunk = []
    for i, model in enumerate(curves):
        chunk.append((i, model))
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def run_search(
    curves: Iterable[CurveModel],
    bounds: BoundsTable | None = None,
    options: SearchOptions = SearchOptions(),
    progress=None,
) -> RecordLedger:
    """Fold the best covers of every curve into a ledger.

    The result does not depend on ``options.workers``: ties are broken by the
    stream index, and the pruning rule never discards a curve that could tie.
    """
    ledger = RecordLedger()
    jobs = ((chunk, options) for chunk in _chunks(curves, options.chunk_size))
    if options.workers <= 1:
        results = map(_search_chunk, jobs)
        pool = None
    else:
        pool = mp.get_context("fork").Pool(options.workers)
        results = pool.imap_unordered(_search_chunk, jobs)
    try:
        for part in results:
            ledger = ledger.merge(part)
            if progress is not None:
                progress(ledger)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return ledger

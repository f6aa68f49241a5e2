"""Acceptance criteria 1-7, one PASS/FAIL line each (see the terminal summary)."""

import random
import time

import pytest

from conftest import random_models
from oracles import abelian_chains, brute_count, closure_subgroups
from manypoints.abgroup import AbelianStructure, all_subgroups, subgroup_generated
from manypoints.cli import main
from manypoints.curve import (
    class_number,
    count_points_ext,
    curve,
    l_polynomial,
    places_of_degree,
    predicted_count,
    rational_places,
    weil_interval,
)
from manypoints.enumeration import CurveFamilySpec, enumerate_curves
from manypoints.field import field_for_order
from manypoints.jacobian import enumerate_class_group
from manypoints.paper import RECORDS, Q5_TARGETS, bounds, paper_witnesses, spot_checks
from manypoints.search import (
    IMPROVES,
    MANY_POINTS,
    Bound,
    CoverWitness,
    SearchOptions,
    check_witness,
    covers_for_curve,
    meets_many_points,
    run_search,
    witness_from_places,
)

EMITTED: dict[int, list[CoverWitness]] = {}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# -- 1 -------------------------------------------------------------------------------


def _criterion1():
    m = curve(2, "x^5+x^3+x^2+x", "x")
    cg = enumerate_class_group(m)
    J = cg.jac
    a = cg.place_difference("P_{0}", "P_inf")
    facts = [
        count_points_ext(m, 1) == 4,
        places_of_degree(m, 2) == 2,
        cg.order == 10,
        a != J.identity and J.add(a, a) == J.identity,
    ]
    G = subgroup_generated(cg.structure, [cg.to_vector(a)])
    witnesses = []
    for O, n in [("P_inf", 10), ("P_{0}", 10), ("P_{1,0}", 5), ("P_{1,1}", 5)]:
        opts = SearchOptions(genus_min=6, genus_max=11, min_split=1, base_places=(O,))
        ws = {(w.d, w.genus, w.N): w for w in covers_for_curve(m, opts)}
        facts.append((5, 6, n) in ws and (10, 11, 10) in ws)
        facts.append(ws.get((5, 6, n)) is not None and ws[(5, 6, n)].subgroup_gens == tuple(
            cg.format(cg.from_vector(g)) for g in G.generators()))
        witnesses += list(ws.values())
    w = witness_from_places(m, "P_inf", ["P_inf", "P_{0}"])
    facts.append((w.d, w.genus, w.N) == (5, 6, 10))
    witnesses.append(w)
    return facts, witnesses


def test_criterion1_example1(acceptance):
    (facts, ws), dt = _timed(_criterion1)
    EMITTED[1] = ws
    ok = all(facts) and dt < 1.0
    acceptance(1, ok, f"Example 1 over F_2: {sum(facts)}/{len(facts)} facts, {dt:.2f}s (< 1s)")
    assert ok


# -- 2 -------------------------------------------------------------------------------


def _criterion2():
    m = curve(5, "x^5-x^3+x")
    cg = enumerate_class_group(m)
    vec = lambda lab: cg.to_vector(cg.place_difference(lab, "P_{0}"))  # noqa: E731
    G = subgroup_generated(cg.structure, [vec(p) for p in ("P_inf", "P_{4,3}", "P_{4,2}")])
    w = witness_from_places(m, "P_{0}", ["P_inf", "P_{4,3}", "P_{4,2}"])
    facts = [
        cg.invariants == (8, 8),
        G.index == 8,
        all(G.contains(vec(p)) for p in ("P_inf", "P_{0}", "P_{4,3}", "P_{4,2}")),
        (w.d, w.genus, w.N) == (8, 9, 32),
    ]
    return facts, [w]


def test_criterion2_example2(acceptance):
    (facts, ws), dt = _timed(_criterion2)
    EMITTED[2] = ws
    ok = all(facts) and dt < 1.0
    acceptance(2, ok, f"Example 2 over F_5: {sum(facts)}/{len(facts)} facts, {dt:.2f}s (< 1s)")
    assert ok


# -- 3 -------------------------------------------------------------------------------


def test_criterion3_record_fixture(acceptance):
    ws = paper_witnesses()
    want = [t for tag in ("q16", "q9", "q5") for t in RECORDS[tag]]
    results = []
    for w in ws:
        res, dt = _timed(lambda: check_witness(w))
        results.append((res.ok, (w.d, w.genus, w.N), dt))
    got = [r[1] for r in results]
    g49 = [w for w in ws if w.q == 16 and w.genus == 49]
    q5_g9 = [w for w in ws if w.q == 5 and w.genus == 9]
    ok = (
        all(r[0] for r in results)
        and sorted(got) == sorted(want)
        and all(r[2] < 5 for r in results)
        and len({w.M for w in g49}) == 2
        and len({w.M for w in q5_g9}) == 2
    )
    EMITTED[3] = ws
    slowest = max(r[2] for r in results)
    acceptance(3, ok, f"{sum(r[0] for r in results)}/{len(want)} record witnesses verify, slowest {slowest:.2f}s (< 5s)")
    assert ok


# -- 4 -------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def q5_search():
    spec = CurveFamilySpec.default_for(field_for_order(5))
    return _timed(lambda: run_search(enumerate_curves(spec), bounds(), SearchOptions(genus_min=3, genus_max=13)))


def test_criterion4_full_q5_search(acceptance, q5_search):
    ledger, dt = q5_search
    B = bounds()
    intervals = {7: (22, 26), 9: (26, 32), 12: (30, 38)}
    facts = []
    for g, n in Q5_TARGETS.items():
        facts.append(B.get(5, g) == Bound(*intervals[g]))
        facts.append(ledger.best_n(g) >= n and ledger.classification(g, B, 5) == IMPROVES)
    EMITTED[4] = ledger.witnesses()
    ok = all(facts) and dt < 600
    best = ", ".join(f"g{g}:{ledger.best_n(g)}" for g in Q5_TARGETS)
    acceptance(4, ok, f"F_5 search over {ledger.curves_seen} models: {best}, {dt:.1f}s (< 600s, one core)")
    assert ok


def test_criterion4_parallel_run_agrees(q5_search):
    ledger, _ = q5_search
    spec = CurveFamilySpec.default_for(field_for_order(5))
    par = run_search(enumerate_curves(spec), bounds(), SearchOptions(genus_min=3, genus_max=13, workers=2))
    assert [w.to_json() for w in par.witnesses()] == [w.to_json() for w in ledger.witnesses()]


# -- 5 -------------------------------------------------------------------------------


def test_criterion5_table_spot_checks(acceptance):
    B = bounds()
    facts, emitted, parts = [], [], []
    t0 = time.perf_counter()
    for sc in spot_checks():
        spec = CurveFamilySpec(field_for_order(sc.q), sc.family, sample=sc.sample, seed=sc.seed)
        ledger = run_search(enumerate_curves(spec), B, SearchOptions(genus_min=5, genus_max=6))
        for g, n in sc.targets.items():
            best = ledger.best_n(g)
            upper = B.get(sc.q, g).upper
            facts.append(best >= n and meets_many_points(best, upper) and ledger.classification(g, B, sc.q) == MANY_POINTS)
            parts.append(f"q{sc.q}g{g}:{best}")
        emitted += ledger.witnesses()
    dt = time.perf_counter() - t0
    EMITTED[5] = emitted
    ok = all(facts) and len(facts) == 6 and dt < 1800
    acceptance(5, ok, f"table rows {' '.join(parts)}, {dt:.0f}s (< 1800s)")
    assert ok


# -- 6 -------------------------------------------------------------------------------


def _properties(q):
    models = random_models(q, 200, seed=600 + q)
    lo, hi = weil_interval(q)
    facts = {"h = L(1)": True, "Weil": True, "axioms": True, "Abel-Jacobi": True, "N3/N4": True}
    groups = []
    for m in models:
        cg = enumerate_class_group(m)
        h = class_number(m)
        facts["h = L(1)"] &= cg.order == h == len(set(cg.elements))
        facts["Weil"] &= lo <= h <= hi
        places = rational_places(m)
        for O in places:
            classes = {cg.place_difference(P, O) for P in places}
            facts["Abel-Jacobi"] &= len(classes) == len(places)
        groups.append(cg)
    rng = random.Random(q)
    for _ in range(1000):
        cg = rng.choice(groups)
        J, E = cg.jac, cg.elements
        a, b, c = (rng.choice(E) for _ in range(3))
        facts["axioms"] &= (
            J.add(J.add(a, b), c) == J.add(a, J.add(b, c))
            and J.add(a, b) == J.add(b, a)
            and J.add(a, J.identity) == a
            and J.add(a, J.neg(a)) == J.identity
        )
    for m in models[:20]:
        a1, a2 = l_polynomial(m)
        facts["N3/N4"] &= all(predicted_count(q, a1, a2, k) == brute_count(m, k) for k in (3, 4))
    return facts


def test_criterion6_property_suites(acceptance):
    failures = []
    for q in (2, 3, 4, 5):
        failures += [f"q={q} {name}" for name, ok in _properties(q).items() if not ok]
    chains = abelian_chains(64)
    for inv in chains:
        A = AbelianStructure(inv)
        if len(all_subgroups(A)) != len(closure_subgroups(A)):
            failures.append(f"subgroups of {A}")
    ok = not failures
    detail = "200 models x q in {2,3,4,5}; " + f"{len(chains)} groups of order <= 64"
    acceptance(6, ok, detail + ("" if ok else f"; failed: {failures}"))
    assert ok, failures


# -- 7 -------------------------------------------------------------------------------


def test_criterion7_witness_round_trip(acceptance, tmp_path):
    missing = [n for n in range(1, 6) if n not in EMITTED]
    if missing:
        pytest.skip(f"criteria {missing} did not run in this session")
    ws = [w for n in range(1, 6) for w in EMITTED[n]]
    path = tmp_path / "emitted.jsonl"
    text = "".join(w.to_json() + "\n" for w in ws)
    path.write_text(text)
    code = main(["verify", str(path)])
    again = "".join(CoverWitness.from_json(line).to_json() + "\n" for line in path.read_text().splitlines())
    ok = code == 0 and again == text and all(check_witness(CoverWitness.from_json(w.to_json())).ok for w in ws)
    acceptance(7, ok, f"{len(ws)} emitted witnesses re-verify after serialize/parse, byte-identical: {again == text}")
    assert ok

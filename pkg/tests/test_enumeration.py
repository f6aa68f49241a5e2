import random
from collections import defaultdict
from itertools import combinations, islice

import pytest

from manypoints import poly as P
from manypoints.curve import CurveModel, InvalidModelError, count_points_ext, validate_genus2
from manypoints.enumeration import (
    MODES,
    ArtinSchreierSpace,
    CurveFamilySpec,
    Substitution,
    enumerate_curves,
    find_isomorphism,
    fingerprint,
    h_representatives,
    least_nonsquare,
)
from manypoints.field import field_for_order
from manypoints.paper import paper_witnesses


def _family(q, mode=None, **kw):
    F = field_for_order(q)
    spec = CurveFamilySpec(F, mode, **kw) if mode else CurveFamilySpec.default_for(F, **kw)
    return list(enumerate_curves(spec))


def _counts(m):
    return count_points_ext(m, 1), count_points_ext(m, 2)


def _buckets(models):
    out = defaultdict(list)
    for m in models:
        out[_counts(m)].append(m)
    return out


def _isomorphic_member(m, buckets):
    for c in buckets.get(_counts(m), ()):
        sub = find_isomorphism(m, c)
        if sub is not None:
            return c, sub
    return None


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_stream_is_deterministic_and_valid(q):
    a, b = _family(q), _family(q)
    assert a == b and len(a) == len(set(a))
    assert all(validate_genus2(m) for m in a)


@pytest.mark.parametrize("q, n", [(2, 56), (3, 134), (4, 1164), (5, 788), (7, 2644)])
def test_family_sizes_are_stable(q, n):
    assert len(_family(q)) == n


def test_sampling_is_seeded_and_a_subset():
    full = _family(7, "odd_char_deg5")
    s1 = _family(7, "odd_char_deg5", sample=0.3, seed=4)
    assert s1 == _family(7, "odd_char_deg5", sample=0.3, seed=4)
    assert s1 != _family(7, "odd_char_deg5", sample=0.3, seed=5)
    assert set(s1) <= set(full) and 0.15 < len(s1) / len(full) < 0.45
    assert _family(7, "odd_char_deg5", sample=1.0, seed=9) == full


def test_odd_normal_forms():
    F = field_for_order(7)
    for m in _family(7, "odd_char_deg5"):
        assert len(m.f) == 6 and m.f[-1] == 1 and m.f[4] == 0
    leads = set()
    for m in _family(7, "odd_char_deg6"):
        assert len(m.f) == 7 and not P.roots_in_field(F, m.f)
        leads.add(m.f[-1])
    assert leads == {1, least_nonsquare(F)}
    with_roots = _family(7, "odd_char_deg6", deg6_rootless=False)
    assert len(with_roots) > len(_family(7, "odd_char_deg6"))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_odd_deg5_family_has_no_affine_duplicates(q):
    for bucket in _buckets(_family(q, "odd_char_deg5")).values():
        for a, b in combinations(bucket, 2):
            assert find_isomorphism(a, b) is None


def _random_models(q, count, seed, shape):
    F = field_for_order(q)
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if F.p == 2:
            h = P.trim(tuple(rng.randrange(q) for _ in range(4)))
            f = P.trim(tuple(rng.randrange(q) for _ in range(7)))
        else:
            h = ()
            f = tuple(rng.randrange(q) for _ in range(shape)) + (rng.randrange(1, q),)
            if shape == 6 and P.roots_in_field(F, f):
                continue
        m = CurveModel(F, h, f)
        try:
            if validate_genus2(m):
                out.append(m)
        except InvalidModelError:
            pass
    return out


@pytest.mark.parametrize("q, mode, shape", [(3, "odd_char_deg5", 5), (5, "odd_char_deg5", 5),
                                            (7, "odd_char_deg5", 5), (5, "odd_char_deg6", 6),
                                            (2, "char2_full", 0), (4, "char2_full", 0)])
def test_every_random_model_has_a_representative(q, mode, shape):
    buckets = _buckets(_family(q, mode))
    for m in _random_models(q, 25, seed=q, shape=shape):
        hit = _isomorphic_member(m, buckets)
        assert hit is not None, m.text()
        target, sub = hit
        assert sub.apply(m) == target
        assert fingerprint(m) == fingerprint(target)


def test_record_curves_are_represented():
    """Every record curve (q=5, 9, 16) is a family member or affinely isomorphic to one."""
    cache = {}
    for w in paper_witnesses():
        m = w.model()
        F = m.field
        key = (F.q, w.h)
        if key not in cache:
            spec = (CurveFamilySpec(F, "char2_full", h_forms=(w.h,)) if F.p == 2
                    else CurveFamilySpec(F, "odd_char_deg5"))
            cache[key] = _buckets(enumerate_curves(spec))
        hit = _isomorphic_member(m, cache[key])
        assert hit is not None, m.text()
        assert hit[1].apply(m) == hit[0]


def test_h_representatives_q16():
    F = field_for_order(16)
    reps = h_representatives(F)
    assert len(reps) == 25 and len(set(reps)) == 25
    assert all(P.deg(h) <= 3 for h in reps)


@pytest.mark.parametrize("q", [2, 4, 8])
def test_artin_schreier_reduction(q):
    F = field_for_order(q)
    rng = random.Random(q)
    for h in h_representatives(F)[:6]:
        space = ArtinSchreierSpace.build(F, h)
        for _ in range(30):
            f = P.trim(tuple(rng.randrange(q) for _ in range(7)))
            r, u = space.reduce(f)
            # f and r differ by u^2 + h u, and r is already reduced
            assert P.padd(F, r, P.padd(F, P.pmul(F, u, u), P.pmul(F, h, u))) == f
            assert space.reduce(r)[0] == r
        reps = list(space.representatives())
        assert len(reps) == len(set(reps))
        assert all(space.reduce(r)[0] == r for r in reps)


def test_substitution_round_trip():
    F = field_for_order(7)
    m = CurveModel(F, (), P.parse_poly(F, "x^5+3*x^3+x+2"))
    sub = Substitution(3, 2, 5, ())
    image = sub.apply(m)
    assert find_isomorphism(m, image) is not None
    assert _counts(image) == _counts(m)


def test_explicit_list(tmp_path):
    F = field_for_order(5)
    p = tmp_path / "curves.txt"
    p.write_text("# two curves\nq=5; f=x^5-x^3+x\n\nq=5; f=x^5+x^2+4*x\n")
    spec = CurveFamilySpec.from_file(F, p)
    assert [m.text() for m in enumerate_curves(spec)] == ["q=5; f=x^5+4*x^3+x", "q=5; f=x^5+x^2+4*x"]
    p.write_text("q=7; f=x^5+1\n")
    with pytest.raises(ValueError):
        list(enumerate_curves(CurveFamilySpec.from_file(F, p)))


@pytest.mark.parametrize(
    "q, mode, kw",
    [(5, "char2_full", {}), (4, "odd_char_deg5", {}), (5, "nope", {}), (5, "odd_char_deg5", {"sample": 0})],
)
def test_spec_validation(q, mode, kw):
    with pytest.raises(ValueError):
        CurveFamilySpec(field_for_order(q), mode, **kw)


def test_modes_listed():
    assert set(MODES) == {"odd_char_deg5", "odd_char_deg6", "odd_char_full", "char2_full", "explicit_list"}
    assert list(islice(enumerate_curves(CurveFamilySpec.default_for(field_for_order(9))), 3))

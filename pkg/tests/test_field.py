import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manypoints.field import (
    DEFAULT_MODULI,
    SUPPORTED_ORDERS,
    FieldError,
    FieldSpec,
    enumerate_elements,
    extension_field,
    field_for_order,
    make_field,
    parse_field_spec,
)


def elements_of(q):
    return st.integers(min_value=0, max_value=q - 1)


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_tables_satisfy_field_axioms(q):
    F = field_for_order(q)
    R = range(q)
    for a, b in itertools.product(R, R):
        assert F.add[a][b] == F.add[b][a]
        assert F.mul[a][b] == F.mul[b][a]
        assert F.add[F.sub[a][b]][b] == a
    for a in R:
        assert F.add[a][0] == a and F.mul[a][1] == a
        assert F.add[a][F.neg(a)] == 0
        if a:
            assert F.mul[a][F.inv(a)] == 1


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_distributive_and_associative(q, data):
    F = field_for_order(q)
    a, b, c = (data.draw(elements_of(q)) for _ in range(3))
    assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]
    assert F.mul[F.mul[a][b]][c] == F.mul[a][F.mul[b][c]]
    assert F.add[F.add[a][b]][c] == F.add[a][F.add[b][c]]


def test_default_moduli_match_the_named_fields():
    F16 = make_field(2, 4)
    a = F16.parse("a")
    # a^4 = a + 1
    assert F16.pow(a, 4) == F16.add[a][1]
    assert F16.mul[a][F16.pow(a, 3)] == F16.parse("a+1")
    F9 = make_field(3, 2)
    b = F9.parse("a")
    assert F9.mul[b][b] == F9.add[b][1]
    assert F16.alpha_is_primitive and F9.alpha_is_primitive
    assert DEFAULT_MODULI[16] == (1, 1, 0, 0, 1)


@pytest.mark.parametrize(
    "q, a, k, want",
    [(5, 2, 4, 1), (7, 3, 6, 1), (13, 2, 12, 1), (11, 2, 5, 10), (2, 1, 9, 1)],
)
def test_pow(q, a, k, want):
    assert field_for_order(q).pow(a, k) == want


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_inverse_of_one_and_of_zero(q):
    F = field_for_order(q)
    assert F.inv(1) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize(
    "p, n, modulus",
    [(2, 2, (1, 0, 1)), (3, 2, (2, 0, 1)), (2, 4, (1, 0, 0, 0, 1))],
)
def test_reducible_modulus_rejected(p, n, modulus):
    with pytest.raises(FieldError):
        make_field(p, n, modulus)


@pytest.mark.parametrize("p, n", [(2, 5), (3, 3), (17, 1), (4, 1)])
def test_out_of_range(p, n):
    with pytest.raises(FieldError):
        FieldSpec(p, n)


@pytest.mark.parametrize("q", [q for q in SUPPORTED_ORDERS if q % 2])
def test_sqrt_agrees_with_squaring(q):
    F = field_for_order(q)
    squares = {F.mul[y][y] for y in range(q)}
    for a in range(q):
        r = F.sqrt(a)
        assert (r is not None) == (a in squares)
        if r is not None:
            assert F.mul[r][r] == a


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_artin_schreier_against_brute_force(q):
    F = field_for_order(q)
    for c, d in itertools.product(range(q), range(q)):
        sols = [y for y in range(q) if F.add[F.mul[y][y]][F.mul[c][y]] == d]
        y = F.artin_schreier_solve(c, d)
        assert y == (min(sols) if sols else None)
    with pytest.raises(FieldError):
        field_for_order(5).artin_schreier_solve(1, 1)


@pytest.mark.parametrize("q", SUPPORTED_ORDERS)
def test_format_parse_round_trip(q):
    F = field_for_order(q)
    for a in range(q):
        assert F.parse(F.format(a)) == a


def test_element_wrapper():
    F = field_for_order(16)
    a = F.element("a")
    assert str(a * a**3) == "a^4"
    assert (a * a**3).value == F.parse("a+1")
    assert str(1 - a + a) == "1"
    assert [e.value for e in enumerate_elements(F)] == list(range(16))


def test_field_spec_text():
    assert parse_field_spec("q=16") == make_field(2, 4)
    F = parse_field_spec("q=16;mod=a^4+a^3+1")
    assert F.spec_text() == "q=16;mod=a^4+a^3+1"
    assert parse_field_spec(F.spec_text()) == F
    with pytest.raises(FieldError):
        parse_field_spec("mod=a^2+1")


@pytest.mark.parametrize("q, k", [(4, 2), (9, 2), (5, 3), (2, 4), (16, 2), (7, 2)])
def test_extension_embedding_is_a_ring_map(q, k):
    F = field_for_order(q)
    E = extension_field(F, k)
    emb = E.embed
    assert len(set(int(x) for x in emb)) == q
    for a, b in itertools.product(range(q), range(q)):
        assert E.add1(int(emb[a]), int(emb[b])) == emb[F.add[a][b]]
        assert E.mul1(int(emb[a]), int(emb[b])) == emb[F.mul[a][b]]

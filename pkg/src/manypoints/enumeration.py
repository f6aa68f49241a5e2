"""Deterministic streams of genus-2 models covering every curve over F_q.

Normal forms (each isomorphism class appears at least once, possibly more):

odd characteristic
    ``odd_char_deg5``: y^2 = f, f monic of degree 5.  The x^4 term is removed
    by translation when p != 5; the rest is reduced under x -> lam*x with lam
    a square (the y-rescaling needs lam^5 to be a square).  For p = 5 the
    whole affine orbit is used.
    ``odd_char_deg6``: y^2 = f, deg f = 6 with leading coefficient 1 or a fixed
    non-square, and, by default, no rational root (a rational root moves to
    infinity and gives a degree-5 model).  The x^5 term is removed by
    translation when p != 3; scaling uses any lam.
    ``odd_char_full``: the two streams above, degree 5 first.
characteristic 2
    ``char2_full``: y^2 + h y = f with h a representative of the orbit of h
    under x -> lam*x + t, y -> mu*y, and f reduced modulo the F_2-linear
    space {u^2 + h u : deg u <= 3}.
``explicit_list``: models given as text, one per line.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Iterator

from . import poly as P
from .curve import CurveModel, InvalidModelError, count_points_ext, validate_genus2
from .field import FieldSpec
from .poly import Coeffs

MODES = ("odd_char_deg5", "odd_char_deg6", "odd_char_full", "char2_full", "explicit_list")


@dataclass(frozen=True)
class CurveFamilySpec:
    field: FieldSpec
    mode: str
    translate: bool = True
    scale: bool = True
    deg6_rootless: bool = True
    sample: float | None = None  # keep each candidate with this probability
    seed: int = 0
    h_forms: tuple[str, ...] | None = None  # char 2: restrict the h representatives
    explicit: tuple[str, ...] = ()  # curve texts for explicit_list

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown family mode {self.mode!r}; choose from {', '.join(MODES)}")
        odd = self.field.p != 2
        if self.mode.startswith("odd_char") and not odd:
            raise ValueError(f"{self.mode} needs odd characteristic")
        if self.mode == "char2_full" and odd:
            raise ValueError("char2_full needs characteristic 2")
        if self.sample is not None and not 0 < self.sample <= 1:
            raise ValueError("sample ratio must lie in (0, 1]")

    @classmethod
    def default_for(cls, F: FieldSpec, **kw) -> "CurveFamilySpec":
        return cls(F, "char2_full" if F.p == 2 else "odd_char_full", **kw)

    @classmethod
    def from_file(cls, F: FieldSpec, path: str | Path) -> "CurveFamilySpec":
        lines = [s.strip() for s in Path(path).read_text().splitlines()]
        return cls(F, "explicit_list", explicit=tuple(s for s in lines if s and not s.startswith("#")))


def enumerate_curves(spec: CurveFamilySpec) -> Iterator[CurveModel]:
    rng = random.Random(spec.seed) if spec.sample is not None else None
    for model in _candidates(spec, rng):
        try:
            if validate_genus2(model):
                yield model
        except InvalidModelError:
            continue


def _keep(rng, ratio) -> bool:
    return rng is None or rng.random() < ratio


def _candidates(spec: CurveFamilySpec, rng) -> Iterator[CurveModel]:
    F = spec.field
    if spec.mode == "explicit_list":
        for text in spec.explicit:
            m = CurveModel.parse(text)
            if m.field != F:
                raise ValueError(f"{text!r} is not over {F.spec_text()}")
            if _keep(rng, spec.sample):
                yield m
        return
    if spec.mode in ("odd_char_deg5", "odd_char_full"):
        yield from _odd_family(spec, rng, 5, (1,))
    if spec.mode in ("odd_char_deg6", "odd_char_full"):
        yield from _odd_family(spec, rng, 6, (1, least_nonsquare(F)))
    if spec.mode == "char2_full":
        yield from _char2_family(spec, rng)


def least_nonsquare(F: FieldSpec) -> int:
    return next(a for a in range(1, F.q) if not F.is_square(a))


# -- odd characteristic ------------------------------------------------------------------


def _odd_family(spec: CurveFamilySpec, rng, n: int, leads) -> Iterator[CurveModel]:
    F = spec.field
    q = F.q
    kill = spec.translate and n % F.p != 0  # translation clears the x^(n-1) term
    full_orbit = spec.translate and not kill
    lams = _scalings(F, n) if spec.scale else [1]
    for c in leads:
        for low in product(range(q), repeat=n - 1 if kill else n):
            if not _keep(rng, spec.sample):
                continue
            f = tuple(reversed(low)) + ((0,) if kill else ()) + (c,)
            if full_orbit:
                if not _is_affine_orbit_min(F, f, n, lams):
                    continue
            elif not _is_scaling_orbit_min(F, f, n, lams):
                continue
            if n == 6 and spec.deg6_rootless and P.roots_in_field(F, f):
                continue
            yield CurveModel(F, (), f)


def _scalings(F: FieldSpec, n: int) -> list[int]:
    # lam for x -> lam x; degree 5 needs lam^5 to be a square, i.e. lam a square
    return [lam for lam in range(1, F.q) if n == 6 or F.is_square(lam)]


def _is_scaling_orbit_min(F: FieldSpec, f: Coeffs, n: int, lams) -> bool:
    key = f[::-1]
    for lam in lams:
        inv = F.inv_[lam]
        # f(lam x) / lam^n: coefficient i picks up lam^(i - n)
        img = tuple(F.mul[f[i]][F.pow(inv, n - i)] for i in range(n, -1, -1))
        if img < key:
            return False
    return True


def _is_affine_orbit_min(F: FieldSpec, f: Coeffs, n: int, lams) -> bool:
    key = f[::-1]
    for t in range(F.q):
        g = P.pshift(F, f, t)
        g = g + (0,) * (n + 1 - len(g))
        for lam in lams:
            inv = F.inv_[lam]
            img = tuple(F.mul[g[i]][F.pow(inv, n - i)] for i in range(n, -1, -1))
            if img < key:
                return False
    return True


# -- characteristic 2 ---------------------------------------------------------------------



def _h_key(h: Coeffs):
    return (len(h), tuple(reversed(h)))


@lru_cache(maxsize=16)
def h_representatives(F: FieldSpec) -> tuple[Coeffs, ...]:
    """One h per orbit of nonzero h (deg <= 3) under x -> lam x + t, y -> mu y."""
    seen: set[Coeffs] = set()
    reps = []
    all_h = sorted((P.trim(c) for c in product(range(F.q), repeat=4) if any(c)), key=_h_key)
    for h in all_h:
        if h in seen:
            continue
        reps.append(h)
        for t in range(F.q):
            shifted = P.pshift(F, h, t)
            for lam in range(1, F.q):
                scaled = P.pscale_var(F, shifted, lam)
                for mu in range(1, F.q):
                    seen.add(P.pscale(F, scaled, mu))
    return tuple(reps)


def _bits(F: FieldSpec, f: Coeffs) -> int:
    n = F.n
    out = 0
    for i, c in enumerate(f):
        out |= c << (i * n)
    return out


def _from_bits(F: FieldSpec, b: int) -> Coeffs:
    n, mask = F.n, F.q - 1
    return P.trim(tuple((b >> (i * n)) & mask for i in range(7)))


@dataclass(frozen=True)
class ArtinSchreierSpace:
    """The F_2-space {u^2 + h u : deg u <= 3} inside polynomials of degree <= 6,
    in reduced echelon form with pivots on the highest bits."""

    field: FieldSpec
    h: Coeffs
    rows: tuple[tuple[int, int, int], ...]  # (pivot bit, vector bits, u bits)

    @classmethod
    @lru_cache(maxsize=256)
    def build(cls, F: FieldSpec, h: Coeffs) -> "ArtinSchreierSpace":
        rows: list[list[int]] = []
        for i in range(4):
            for b in range(F.n):
                u = P.trim((0,) * i + (1 << b,))
                img = P.padd(F, P.pmul(F, u, u), P.pmul(F, h, u))
                vec, comb = _bits(F, img), _bits(F, u)
                for piv, rv, rc in rows:
                    if vec >> piv & 1:
                        vec ^= rv
                        comb ^= rc
                if vec:
                    piv = vec.bit_length() - 1
                    for r in rows:
                        if r[1] >> piv & 1:
                            r[1] ^= vec
                            r[2] ^= comb
                    rows.append([piv, vec, comb])
        rows.sort(reverse=True)
        return cls(F, h, tuple(tuple(r) for r in rows))

    def reduce(self, f: Coeffs) -> tuple[Coeffs, Coeffs]:
        """(r, u) with f = r + u^2 + h u and r reduced."""
        vec, comb = _bits(self.field, f), 0
        for piv, rv, rc in self.rows:
            if vec >> piv & 1:
                vec ^= rv
                comb ^= rc
        return _from_bits(self.field, vec), _from_bits(self.field, comb)

    def representatives(self) -> Iterator[Coeffs]:
        pivots = {piv for piv, _, _ in self.rows}
        free = [b for b in range(7 * self.field.n) if b not in pivots]
        for mask in range(1 << len(free)):
            vec = 0
            for j, b in enumerate(free):
                if mask >> j & 1:
                    vec |= 1 << b
            yield _from_bits(self.field, vec)


def _char2_family(spec: CurveFamilySpec, rng) -> Iterator[CurveModel]:
    F = spec.field
    if spec.h_forms is not None:
        hs = [P.parse_poly(F, s) for s in spec.h_forms]
    elif spec.translate or spec.scale:
        hs = list(h_representatives(F))
    else:
        hs = [P.trim(c) for c in product(range(F.q), repeat=4) if any(c)]
    for h in hs:
        space = ArtinSchreierSpace.build(F, h)
        for f in space.representatives():
            if _keep(rng, spec.sample):
                yield CurveModel(F, h, f)


# -- invariants and isomorphisms ---------------------------------------------------------


def fingerprint(model: CurveModel) -> tuple:
    from .jacobian import enumerate_class_group

    cg = enumerate_class_group(model)
    return (count_points_ext(model, 1), count_points_ext(model, 2), cg.order, list(cg.invariants))


@dataclass(frozen=True)
class Substitution:
    """x -> lam*x + t, y -> mu*y + u(x), taking the source model to the target."""

    lam: int
    t: int
    mu: int
    u: Coeffs

    def apply(self, model: CurveModel) -> CurveModel:
        F = model.field
        lam, t, mu, u = self.lam, self.t, self.mu, self.u
        h = P.pscale_var(F, P.pshift(F, model.h, t), lam)
        f = P.pscale_var(F, P.pshift(F, model.f, t), lam)
        # (mu Y + u)^2 + h (mu Y + u) = f  =>  Y^2 + (h + 2u)/mu Y = (f - u^2 - h u)/mu^2
        inv = F.inv_[mu]
        h2 = P.pscale(F, P.padd(F, h, P.pscale(F, u, F.from_int(2))), inv)
        f2 = P.pscale(F, P.psub(F, f, P.padd(F, P.pmul(F, u, u), P.pmul(F, h, u))), F.mul[inv][inv])
        return CurveModel(F, h2, f2)


def find_isomorphism(source: CurveModel, target: CurveModel) -> Substitution | None:
    """An affine substitution carrying ``source`` to ``target``, by exhaustive search."""
    F = source.field
    if F != target.field:
        return None
    for t in range(F.q):
        for lam in range(1, F.q):
            h = P.pscale_var(F, P.pshift(F, source.h, t), lam)
            f = P.pscale_var(F, P.pshift(F, source.f, t), lam)
            for mu in range(1, F.q):
                if F.p != 2:
                    m2 = F.mul[mu][mu]
                    if P.pscale(F, f, F.inv_[m2]) == target.f:
                        return Substitution(lam, t, mu, ())
                    continue
                if P.pscale(F, h, F.inv_[mu]) != target.h:
                    continue
                # need f - mu^2 f_target = u^2 + h u for some u
                diff = P.psub(F, f, P.pscale(F, target.f, F.mul[mu][mu]))
                r, u = ArtinSchreierSpace.build(F, h).reduce(diff)
                if not r:
                    sub = Substitution(lam, t, mu, u)
                    if sub.apply(source) == target:
                        return sub
    return None

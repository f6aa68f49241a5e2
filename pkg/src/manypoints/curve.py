"""Genus-2 models y^2 + h(x)*y = f(x), their rational places and zeta data."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import poly as P
from .field import FieldSpec, extension_field, field_for_order, parse_field_spec
from .poly import Coeffs


class InvalidModelError(ValueError):
    pass


@dataclass(frozen=True)
class CurveModel:
    field: FieldSpec
    h: Coeffs
    f: Coeffs

    @classmethod
    def from_strings(cls, F: FieldSpec, h: str | None, f: str) -> "CurveModel":
        hc = P.parse_poly(F, h) if h else P.ZERO
        return cls(F, hc, P.parse_poly(F, f))

    @classmethod
    def parse(cls, text: str) -> "CurveModel":
        """Parse 'q=16; h=x^2+x; f=x^5+x^3+x^2+x' (an optional mod= may follow q=)."""
        parts = {}
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            if "=" not in chunk:
                raise InvalidModelError(f"bad curve text chunk {chunk!r}")
            key, val = chunk.split("=", 1)
            parts[key.strip()] = val.strip()
        if "q" not in parts or "f" not in parts:
            raise InvalidModelError(f"curve text {text!r} needs q= and f=")
        spec = f"q={parts['q']}" + (f";mod={parts['mod']}" if parts.get("mod") else "")
        F = parse_field_spec(spec)
        return cls.from_strings(F, parts.get("h"), parts["f"])

    def text(self) -> str:
        F = self.field
        out = F.spec_text()
        if self.h or F.p == 2:
            out += f"; h={P.format_poly(F, self.h)}"
        return out + f"; f={P.format_poly(F, self.f)}"

    def __str__(self):
        return self.text()

    @property
    def q(self) -> int:
        return self.field.q

    def on_curve(self, x: int, y: int) -> bool:
        F = self.field
        lhs = F.add[F.mul[y][y]][F.mul[P.peval(F, self.h, x)][y]]
        return lhs == P.peval(F, self.f, x)

    def infinity_chart(self) -> tuple[Coeffs, Coeffs]:
        """(H, G) with Y^2 + H(X) Y = G(X) in X = 1/x, Y = y/x^3."""
        return P.preverse(self.h, 3), P.preverse(self.f, 6)


def curve(q: int, f: str, h: str | None = None, modulus=None) -> CurveModel:
    F = field_for_order(q, modulus)
    return CurveModel.from_strings(F, h, f)


# -- validity ---------------------------------------------------------------


def _char2_smooth_at_zero_chart(F: FieldSpec, h: Coeffs, f: Coeffs) -> bool:
    """gcd(h, f'^2 + f*h'^2) = 1: no singular affine point."""
    dh, df = P.pderiv(F, h), P.pderiv(F, f)
    crit = P.padd(F, P.pmul(F, df, df), P.pmul(F, f, P.pmul(F, dh, dh)))
    if not crit:
        return False
    return len(P.pgcd(F, h, crit)) == 1


def validate_genus2(model: CurveModel) -> bool:
    F, h, f = model.field, model.h, model.f
    if P.deg(h) > 3 or P.deg(f) > 6:
        raise InvalidModelError("need deg h <= 3 and deg f <= 6")
    if F.p != 2:
        if P.deg(f) not in (5, 6):
            raise InvalidModelError("need deg f in {5, 6}")
        return not h and P.is_squarefree(F, f)
    if not h:
        return False
    if not _char2_smooth_at_zero_chart(F, h, f):
        return False
    H, G = model.infinity_chart()
    if P.coeff(H, 0) != 0:
        return True
    dH, dG = P.pderiv(F, H), P.pderiv(F, G)
    g0, dg0, dh0 = P.coeff(G, 0), P.coeff(dG, 0), P.coeff(dH, 0)
    return F.add[F.mul[dg0][dg0]][F.mul[g0][F.mul[dh0][dh0]]] != 0


def require_valid(model: CurveModel) -> None:
    if not validate_genus2(model):
        raise InvalidModelError(f"not a smooth genus-2 model: {model.text()}")


# -- rational places ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class Place:
    """A degree-1 place.  For places at infinity ``y`` is the value of y/x^3."""

    sort_key: tuple
    kind: str
    x: int | None
    y: int | None
    label: str

    @property
    def at_infinity(self) -> bool:
        return self.kind.startswith("inf")

    def __str__(self):
        return self.label


def _label(F: FieldSpec, kind: str, x, y) -> str:
    if kind == "inf_ramified":
        return "P_inf"
    if kind == "inf_split":
        return f"P_inf_{{{F.format(y)}}}"
    if kind == "affine_ramified":
        return f"P_{{{F.format(x)}}}"
    return f"P_{{{F.format(x)},{F.format(y)}}}"


def _make_place(F: FieldSpec, kind: str, x, y) -> Place:
    key = (0, -1, y) if kind.startswith("inf") else (1, x, y)
    return Place(key, kind, x, y, _label(F, kind, x, y))


def _fiber(F: FieldSpec, hx: int, fx: int) -> list[int]:
    """Sorted y with y^2 + hx*y = fx."""
    if F.p == 2:
        if hx == 0:
            return [F.frobenius_root(fx)]
        y = F.artin_schreier_solve(hx, fx)
        return [] if y is None else sorted({y, F.add[y][hx]})
    # odd characteristic: complete the square
    disc = F.add[F.mul[hx][hx]][F.mul[F.from_int(4)][fx]]
    r = F.sqrt_[disc]
    if r is None:
        return []
    half = F.inv_[F.from_int(2)]
    ys = {F.mul[F.sub[r][hx]][half], F.mul[F.sub[F.neg_[r]][hx]][half]}
    return sorted(ys)


def infinity_kind(model: CurveModel) -> str:
    """'ramified', 'split' or 'inert' for the fiber over x = infinity."""
    F = model.field
    H, G = model.infinity_chart()
    h3, f6 = P.coeff(H, 0), P.coeff(G, 0)
    if F.p == 2:
        if h3 == 0:
            return "ramified"
    elif f6 == 0:
        return "ramified"
    return "split" if _fiber(F, h3, f6) else "inert"


@lru_cache(maxsize=4096)
def rational_places(model: CurveModel) -> tuple[Place, ...]:
    require_valid(model)
    F = model.field
    out = []
    H, G = model.infinity_chart()
    h3, f6 = P.coeff(H, 0), P.coeff(G, 0)
    kind = infinity_kind(model)
    if kind == "ramified":
        out.append(_make_place(F, "inf_ramified", None, _fiber(F, h3, f6)[0]))
    elif kind == "split":
        for y in _fiber(F, h3, f6):
            out.append(_make_place(F, "inf_split", None, y))
    for x in range(F.q):
        hx, fx = P.peval(F, model.h, x), P.peval(F, model.f, x)
        ys = _fiber(F, hx, fx)
        if len(ys) == 1:
            out.append(_make_place(F, "affine_ramified", x, ys[0]))
        else:
            out.extend(_make_place(F, "affine_split", x, y) for y in ys)
    return tuple(sorted(out))


_LABEL = re.compile(r"^P_(?:(inf)(?:_\{(.+)\})?|\{([^,]+)(?:,(.+))?\})$")


def find_place(model: CurveModel, label: str) -> Place:
    """Look up a rational place by label; element spellings such as '-a' are accepted."""
    label = label.strip().replace(" ", "")
    if label in ("P_inf", "P_infty", "P_\\infty"):
        label = "P_inf"
    m = _LABEL.match(label)
    if not m:
        raise InvalidModelError(f"bad place label {label!r}")
    F = model.field
    places = rational_places(model)
    if m.group(1):
        want_y = F.parse(m.group(2)) if m.group(2) else None
        for pl in places:
            if pl.at_infinity and (want_y is None and pl.kind == "inf_ramified" or pl.y == want_y):
                return pl
    else:
        x = F.parse(m.group(3))
        y = F.parse(m.group(4)) if m.group(4) else None
        for pl in places:
            if not pl.at_infinity and pl.x == x and (y is None and pl.kind == "affine_ramified" or pl.y == y):
                if y is None or pl.kind == "affine_split":
                    return pl
    raise InvalidModelError(f"place {label} is not a rational place of {model.text()}")


# -- point counts and L-polynomial -------------------------------------------


def count_points_ext(model: CurveModel, k: int) -> int:
    """Number of F_{q^k}-points on the smooth model, by brute force over F_{q^k}."""
    require_valid(model)
    if not 1 <= k <= 4:
        raise ValueError("extension degree must be in 1..4")
    return _count_points(model, k)


@lru_cache(maxsize=4096)
def _count_points(model: CurveModel, k: int) -> int:
    F = model.field
    E = extension_field(F, k)
    X = np.arange(E.Q, dtype=np.int64)
    fx = E.eval_poly(model.f, X)
    H, G = model.infinity_chart()
    h3, f6 = int(E.embed[P.coeff(H, 0)]), int(E.embed[P.coeff(G, 0)])
    if F.p == 2:
        hx = E.eval_poly(model.h, X)
        zero = hx == 0
        safe_h = np.where(zero, 1, hx)
        z = E.vmul(fx, E.inv(E.vmul(safe_h, safe_h)))
        good = (E.trace(z) == 0) & ~zero
        affine = int(zero.sum()) + 2 * int(good.sum())
        if h3 == 0:
            inf = 1
        else:
            z_inf = E.mul1(f6, int(E.inv(np.array([E.mul1(h3, h3)]))[0]))
            inf = 2 if int(E.trace(np.array([z_inf]))[0]) == 0 else 0
    else:
        affine = E.Q + int(E.quadratic_character(fx).sum())
        inf = 1 if f6 == 0 else 1 + int(E.quadratic_character(np.array([f6]))[0])
    return affine + inf


def l_polynomial(model: CurveModel) -> tuple[int, int]:
    """(a1, a2) with L(t) = 1 + a1 t + a2 t^2 + q a1 t^3 + q^2 t^4."""
    q = model.q
    n1, n2 = count_points_ext(model, 1), count_points_ext(model, 2)
    a1 = n1 - (q + 1)
    twice = a1 * a1 - (q * q + 1 - n2)
    if twice % 2:
        raise InvalidModelError("non-integral a2; the model is not of genus 2")
    return a1, twice // 2


def class_number(model: CurveModel) -> int:
    q = model.q
    a1, a2 = l_polynomial(model)
    return 1 + a1 + a2 + q * a1 + q * q


def places_of_degree(model: CurveModel, d: int) -> int:
    n1 = count_points_ext(model, 1)
    if d == 1:
        return n1
    if d == 2:
        n2 = count_points_ext(model, 2)
        if (n2 - n1) % 2:
            raise ArithmeticError("N_2 - N_1 is odd")
        return (n2 - n1) // 2
    raise ValueError("only degrees 1 and 2 are supported")


def predicted_count(q: int, a1: int, a2: int, k: int) -> int:
    """N_k implied by the L-polynomial, via Newton's identities on its reciprocal roots."""
    e = [1, -a1, a2, -q * a1, q * q]
    s = [0] * (k + 1)
    for n in range(1, k + 1):
        acc = n * e[n] * (-1) ** (n - 1) if n <= 4 else 0
        for i in range(1, n):
            if i <= 4:
                acc += (-1) ** (i - 1) * e[i] * s[n - i]
        s[n] = acc
    return q**k + 1 - s[k]


def weil_interval(q: int) -> tuple[int, int]:
    """Integer bounds containing every genus-2 class number over F_q."""
    lo = math.floor((math.sqrt(q) - 1) ** 4)
    hi = math.ceil((math.sqrt(q) + 1) ** 4)
    return lo, hi

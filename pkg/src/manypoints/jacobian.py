"""Divisor class groups of genus-2 models via Mumford representations.

Three shapes of model are handled, keyed by the fibre over x = infinity:

* ``imaginary``: one rational ramified point at infinity.  Classes are
  [D - deg(D) inf] with D reduced, deg u <= 2 (classical Cantor).
* ``real``: two rational points inf+ and inf- at infinity.  Classes are
  [D + n inf+ + (2 - deg u - n) inf- - (inf+ + inf-)] with 0 <= n <= 2 - deg u
  (the balanced representation); ``n`` is stored on the class.
* ``unusual``: infinity is a single place of degree 2.  Classes are
  [D - (deg u / 2) inf] with deg u in {0, 2}.

``normalize_model`` moves a rational Weierstrass point to infinity whenever
one exists, so most curves end up imaginary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import poly as P
from .abgroup import AbelianStructure, smith_normal_form
from .curve import CurveModel, InvalidModelError, Place, find_place, infinity_kind, rational_places, require_valid
from .field import FieldSpec
from .poly import ONE, ZERO, Coeffs


class ClassGroupError(ArithmeticError):
    pass


class MumfordClass(NamedTuple):
    u: Coeffs
    v: Coeffs
    n: int = 0


# -- normalisation --------------------------------------------------------------

WorkingPoint = tuple  # ("aff", x, y) or ("inf", y)


@dataclass(frozen=True)
class NormalizedModel:
    original: CurveModel
    working: CurveModel
    kind: str  # imaginary | real | unusual
    rho: int | None  # x -> rho + 1/x was applied
    shift: int | None  # then y -> y - shift*x^3
    place_map: dict = field(compare=False, hash=False)

    def working_point(self, place: Place) -> WorkingPoint:
        return self.place_map[place.label]


def _move_to_infinity(F: FieldSpec, h: Coeffs, f: Coeffs, rho: int) -> tuple[Coeffs, Coeffs]:
    # x = rho + 1/X, y = Y / X^3
    return P.preverse(P.pshift(F, h, rho), 3), P.preverse(P.pshift(F, f, rho), 6)


def normalize_model(model: CurveModel) -> NormalizedModel:
    """Put a rational Weierstrass point (if any) at infinity.

    Returns the working model with the substitution used and a map from the
    original place labels to points of the working model.
    """
    require_valid(model)
    F = model.field
    h, f = model.h, model.f
    kind = infinity_kind(model)
    rho = None
    if kind != "ramified":
        branch = h if F.p == 2 else f
        roots = P.roots_in_field(F, branch)
        if roots:
            rho = roots[0][0]
            h, f = _move_to_infinity(F, h, f, rho)
    shift = None
    if F.p == 2 and P.coeff(h, 3) == 0 and P.deg(f) == 6:
        s = F.frobenius_root(f[6])
        t = P.pscale(F, (0, 0, 0, 1), s)
        # y = Y + t: h' = h + 2t = h, f' = f - t^2 - h t
        f = P.psub(F, P.psub(F, f, P.pmul(F, t, t)), P.pmul(F, h, t))
        shift = s
    working = CurveModel(F, h, f)
    require_valid(working)
    wkind = {"ramified": "imaginary", "split": "real", "inert": "unusual"}[infinity_kind(working)]

    def to_working(pl: Place) -> WorkingPoint:
        if rho is None:
            pt = ("inf", pl.y) if pl.at_infinity else ("aff", pl.x, pl.y)
        elif pl.at_infinity:
            pt = ("aff", 0, pl.y)
        elif pl.x == rho:
            pt = ("inf", pl.y)
        else:
            X = F.inv(F.sub[pl.x][rho])
            pt = ("aff", X, F.mul[pl.y][F.pow(X, 3)])
        if shift is not None:
            if pt[0] == "inf":
                pt = ("inf", F.sub[pt[1]][shift])
            else:
                pt = ("aff", pt[1], F.sub[pt[2]][F.mul[shift][F.pow(pt[1], 3)]])
        return pt

    wplaces = {("inf", p.y) if p.at_infinity else ("aff", p.x, p.y) for p in rational_places(working)}
    place_map = {}
    for pl in rational_places(model):
        pt = to_working(pl)
        if pt not in wplaces:
            raise ClassGroupError(f"place {pl.label} did not map onto the working model")
        place_map[pl.label] = pt
    if len(place_map) != len(wplaces):
        raise ClassGroupError("normalisation changed the number of rational places")
    return NormalizedModel(model, working, wkind, rho, shift, place_map)


# -- group law ----------------------------------------------------------------------


class Jacobian:
    """Group law on Mumford classes of a working model."""

    def __init__(self, model: CurveModel, kind: str):
        self.model = model
        self.kind = kind
        self.F = model.field
        self.h, self.f = model.h, model.f
        self.identity = MumfordClass(ONE, ZERO, 1 if kind == "real" else 0)
        if kind == "real":
            self.vplus, self.vminus = self._infinite_branches()

    def _infinite_branches(self) -> tuple[Coeffs, Coeffs]:
        """Polynomial parts V+, V- (degree 3) of the two branches of y at infinity."""
        F, h, f = self.F, self.h, self.f
        H, G = self.model.infinity_chart()
        from .curve import _fiber

        tops = _fiber(F, P.coeff(H, 0), P.coeff(G, 0))
        if len(tops) != 2:
            raise ClassGroupError("real model needs two rational points at infinity")
        out = []
        for c3 in tops:
            V = [0, 0, 0, c3]
            for j in (1, 2, 3):
                for c in range(F.q):
                    V[3 - j] = c
                    Vc = P.trim(V)
                    N = P.psub(F, P.padd(F, P.pmul(F, Vc, Vc), P.pmul(F, h, Vc)), f)
                    if P.coeff(N, 6 - j) == 0:
                        break
                else:
                    raise ClassGroupError("branch expansion at infinity failed")
            out.append(P.trim(V))
        return out[0], out[1]

    # -- low level --
    def _compose(self, u1, v1, u2, v2):
        """Semi-reduced sum of two affine divisors; also returns deg of the removed gcd."""
        F, h, f = self.F, self.h, self.f
        d1, e1, e2 = P.pxgcd(F, u1, u2)
        if len(d1) == 1:
            u = P.pmul(F, u1, u2)
            v = P.pmod(F, P.padd(F, P.pmul(F, P.pmul(F, e1, u1), v2), P.pmul(F, P.pmul(F, e2, u2), v1)), u)
            return u, v, 0
        d, c1, c2 = P.pxgcd(F, d1, P.padd(F, P.padd(F, v1, v2), h))
        s1, s2, s3 = P.pmul(F, c1, e1), P.pmul(F, c1, e2), c2
        u = P.pdiv_exact(F, P.pmul(F, u1, u2), P.pmul(F, d, d))
        num = P.padd(
            F,
            P.padd(F, P.pmul(F, P.pmul(F, s1, u1), v2), P.pmul(F, P.pmul(F, s2, u2), v1)),
            P.pmul(F, s3, P.padd(F, P.pmul(F, v1, v2), f)),
        )
        v = P.pmod(F, P.pdiv_exact(F, num, d), u)
        return u, v, len(d) - 1

    def _cantor_step(self, u, v):
        F, h, f = self.F, self.h, self.f
        norm = P.psub(F, f, P.padd(F, P.pmul(F, v, h), P.pmul(F, v, v)))
        un = P.pmonic(F, P.pdiv_exact(F, norm, u))
        vn = P.pmod(F, P.psub(F, P.pneg(F, h), v), un)
        return un, vn

    def _real_step(self, u, v, A, B, towards_plus: bool):
        F, h, f = self.F, self.h, self.f
        Vp, Vm = self.vplus, self.vminus
        V = Vp if towards_plus else Vm
        w = P.psub(F, V, P.pmod(F, P.psub(F, V, v), u))
        norm = P.psub(F, P.padd(F, P.pmul(F, w, w), P.pmul(F, w, h)), f)
        dn = len(norm) - 1
        dp, dm = P.psub(F, Vp, w), P.psub(F, Vm, w)
        a = len(dp) - 1 if dp else dn - 3
        b = len(dm) - 1 if dm else dn - 3
        if a + b != dn:
            raise ClassGroupError("pole orders at infinity do not add up")
        un = P.pmonic(F, P.pdiv_exact(F, norm, u))
        vn = P.pmod(F, P.psub(F, P.pneg(F, h), w), un)
        k = len(un) - 1
        return un, vn, A + a - k, B + b - k

    def _reduce_real(self, u, v, A, B) -> MumfordClass:
        while len(u) - 1 > 2:
            u, v, A, B = self._real_step(u, v, A, B, True)
        for _ in range(16):
            if A < -1:
                u, v, A, B = self._real_step(u, v, A, B, False)
            elif B < -1:
                u, v, A, B = self._real_step(u, v, A, B, True)
            else:
                return MumfordClass(u, v, A + 1)
        raise ClassGroupError("balanced reduction did not converge")

    # -- group operations --
    def add(self, a: MumfordClass, b: MumfordClass) -> MumfordClass:
        u, v, s = self._compose(a.u, a.v, b.u, b.v)
        if self.kind == "real":
            ka, kb = len(a.u) - 1, len(b.u) - 1
            A = (a.n - 1) + (b.n - 1) + s
            B = (1 - ka - a.n) + (1 - kb - b.n) + s
            return self._reduce_real(u, v, A, B)
        while len(u) - 1 > 2:
            u, v = self._cantor_step(u, v)
        return MumfordClass(u, v, 0)

    def neg(self, a: MumfordClass) -> MumfordClass:
        F = self.F
        v = P.pmod(F, P.psub(F, P.pneg(F, self.h), a.v), a.u)
        if self.kind == "real":
            return MumfordClass(a.u, v, 2 - (len(a.u) - 1) - a.n)
        return MumfordClass(a.u, v, 0)

    def sub(self, a: MumfordClass, b: MumfordClass) -> MumfordClass:
        return self.add(a, self.neg(b))

    def mul(self, k: int, a: MumfordClass) -> MumfordClass:
        if k < 0:
            return self.mul(-k, self.neg(a))
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    def is_valid(self, a: MumfordClass) -> bool:
        F = self.F
        if not a.u or a.u[-1] != 1 or len(a.v) >= max(len(a.u), 1) and a.v:
            return False
        k = len(a.u) - 1
        if k > 2:
            return False
        norm = P.psub(F, P.padd(F, P.pmul(F, a.v, a.v), P.pmul(F, a.v, self.h)), self.f)
        if P.pmod(F, norm, a.u):
            return False
        if self.kind == "real":
            return 0 <= a.n <= 2 - k
        if self.kind == "unusual":
            return a.n == 0 and k % 2 == 0
        return a.n == 0

    # -- points --
    def point_class(self, pt: WorkingPoint) -> MumfordClass:
        """[pt - inf] (imaginary) or [pt - inf+] (real)."""
        F = self.F
        if self.kind == "unusual":
            raise ClassGroupError("no rational point at infinity on an unusual model")
        if pt[0] == "inf":
            if self.kind == "imaginary" or pt[1] == P.coeff(self.vplus, 3):
                return self.identity
            return MumfordClass(ONE, ZERO, 0)  # inf- minus inf+
        _, x, y = pt
        return MumfordClass((F.neg_[x], 1), P.trim((y,)), 0)

    def point_difference(self, p: WorkingPoint, o: WorkingPoint) -> MumfordClass:
        """[p - o] for rational points of the working model."""
        if self.kind != "unusual":
            return self.sub(self.point_class(p), self.point_class(o))
        if p == o:
            return self.identity
        F = self.F
        _, xo, yo = o
        iy = F.sub[F.neg_[yo]][P.peval(F, self.h, xo)]
        u, v, s = self._compose((F.neg_[p[1]], 1), P.trim((p[2],)), (F.neg_[xo], 1), P.trim((iy,)))
        return MumfordClass(u, v, 0)

    # -- text --
    def format(self, a: MumfordClass) -> str:
        F = self.F
        body = f"{P.format_poly(F, a.u)}, {P.format_poly(F, a.v)}"
        if self.kind == "real":
            body += f", {a.n}"
        return f"({body})"

    def parse(self, text: str) -> MumfordClass:
        text = text.strip()
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError(f"bad Mumford class text {text!r}")
        parts = [s.strip() for s in text[1:-1].split(",")]
        if len(parts) not in (2, 3):
            raise ValueError(f"bad Mumford class text {text!r}")
        u, v = P.parse_poly(self.F, parts[0]), P.parse_poly(self.F, parts[1])
        n = int(parts[2]) if len(parts) == 3 else 0
        cls = MumfordClass(u, v, n)
        if not self.is_valid(cls):
            raise ValueError(f"{text} is not a reduced class on this model")
        return cls

    # -- enumeration --
    def reduced_classes(self) -> list[MumfordClass]:
        """Every reduced representative, in canonical order."""
        F = self.F
        out = []
        aff_points = [p for p in rational_places(self.model) if not p.at_infinity]
        if self.kind == "real":
            out.extend(MumfordClass(ONE, ZERO, n) for n in range(3))
            for p in aff_points:
                for n in range(2):
                    out.append(MumfordClass((F.neg_[p.x], 1), P.trim((p.y,)), n))
        else:
            out.append(self.identity)
            if self.kind == "imaginary":
                for p in aff_points:
                    out.append(MumfordClass((F.neg_[p.x], 1), P.trim((p.y,)), 0))
        out.extend(MumfordClass(u, v, 0) for u, v in self._degree_two_classes())
        return sorted(out, key=class_sort_key)

    def _degree_two_classes(self):
        F, h, f = self.F, self.h, self.f
        q = F.q
        ADD, MUL, NEG = _np_tables(F)
        V0, V1 = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
        V0, V1 = V0.ravel(), V1.ravel()
        v1sq, v0v1, v0sq = MUL[V1, V1], MUL[V0, V1], MUL[V0, V0]
        two = F.from_int(2)
        found = []
        for u1 in range(q):
            for u0 in range(q):
                u = (u0, u1, 1)
                rf, rh = P.pmod(F, f, u), P.pmod(F, h, u)
                rf0, rf1 = P.coeff(rf, 0), P.coeff(rf, 1)
                rh0, rh1 = P.coeff(rh, 0), P.coeff(rh, 1)
                xcoef = ADD[
                    ADD[MUL[two, v0v1], NEG[MUL[u1, v1sq]]],
                    ADD[ADD[MUL[rh1, V0], MUL[rh0, V1]], NEG[MUL[MUL[rh1, u1], V1]]],
                ]
                ccoef = ADD[ADD[v0sq, NEG[MUL[u0, v1sq]]], ADD[MUL[rh0, V0], NEG[MUL[MUL[rh1, u0], V1]]]]
                hits = np.flatnonzero((xcoef == rf1) & (ccoef == rf0))
                for i in hits:
                    found.append((u, P.trim((int(V0[i]), int(V1[i])))))
        return found


def class_sort_key(c: MumfordClass):
    return (len(c.u), c.u, len(c.v), c.v, c.n)


@lru_cache(maxsize=32)
def _np_tables(F: FieldSpec):
    return np.array(F.add), np.array(F.mul), np.array(F.neg_)


# -- class group ----------------------------------------------------------------------


class ClassGroup:
    """Full element table of Cl(F) with invariant factors and discrete logs."""

    def __init__(self, model: CurveModel):
        from .curve import class_number

        self.model = model
        self.normalized = normalize_model(model)
        self.jac = J = Jacobian(self.normalized.working, self.normalized.kind)
        self.elements = J.reduced_classes()
        self.order = len(self.elements)
        h = class_number(model)
        if self.order != h:
            raise ClassGroupError(f"enumerated {self.order} classes but L(1) = {h} for {model.text()}")
        self._index = {c: i for i, c in enumerate(self.elements)}
        if len(self._index) != self.order:
            raise ClassGroupError("duplicate class representatives")
        self._build_structure()

    def _build_structure(self) -> None:
        J = self.J if hasattr(self, "J") else self.jac
        coords: dict[MumfordClass, tuple[int, ...]] = {J.identity: ()}
        gens: list[MumfordClass] = []
        relations: list[list[int]] = []
        for x in self.elements:
            if x in coords:
                continue
            t = len(gens)
            y, k = x, 1
            while y not in coords:
                y = J.add(y, x)
                k += 1
            if y not in self._index:
                raise ClassGroupError("group law left the element table")
            rel = [-c for c in coords[y]] + [0] * (t - len(coords[y]))
            rel.append(k)
            relations.append(rel)
            for s, c in list(coords.items()):
                c = c + (0,) * (t - len(c))
                z = s
                for j in range(1, k):
                    z = J.add(z, x)
                    coords[z] = c + (j,)
            gens.append(x)
        if len(coords) != self.order:
            raise ClassGroupError("closure did not reach every class")
        t = len(gens)
        if t == 0:
            self.invariants, self.generators, self._vectors = (), [], {J.identity: ()}
            self.structure = AbelianStructure(())
            return
        R = [r + [0] * (t - len(r)) for r in relations]
        diag, _, V, Vinv = smith_normal_form(R)
        keep = [i for i, d in enumerate(diag) if d != 1]
        self.invariants = tuple(diag[i] for i in keep)
        self.structure = AbelianStructure(self.invariants)
        self.generators = []
        for i in keep:
            g = J.identity
            for j in range(t):
                if Vinv[i][j]:
                    g = J.add(g, J.mul(Vinv[i][j], gens[j]))
            self.generators.append(g)
        vectors = {}
        for el, c in coords.items():
            c = c + (0,) * (t - len(c))
            vectors[el] = tuple(sum(c[j] * V[j][i] for j in range(t)) % diag[i] for i in keep)
        self._vectors = vectors
        self._by_vector = {v: el for el, v in vectors.items()}
        for g, d in zip(self.generators, self.invariants):
            if J.mul(d, g) != J.identity:
                raise ClassGroupError("generator order does not match its invariant factor")

    # -- lookups --
    def to_vector(self, c: MumfordClass) -> tuple[int, ...]:
        try:
            return self._vectors[c]
        except KeyError:
            raise ClassGroupError(f"{c} is not in the element table") from None

    def from_vector(self, v) -> MumfordClass:
        return self._by_vector[self.structure.reduce(v)]

    def index_of(self, c: MumfordClass) -> int:
        return self._index[c]

    def place_difference(self, p: Place | str, o: Place | str) -> MumfordClass:
        """[P - deg(P) O] as a class on the working model."""
        if isinstance(p, str):
            p = find_place(self.model, p)
        if isinstance(o, str):
            o = find_place(self.model, o)
        nm = self.normalized
        return self.jac.point_difference(nm.working_point(p), nm.working_point(o))

    def summary(self) -> str:
        return f"h={self.order}; structure={self.structure}"

    def format(self, c: MumfordClass) -> str:
        return self.jac.format(c)

    def parse(self, text: str) -> MumfordClass:
        return self.jac.parse(text)


@lru_cache(maxsize=256)
def enumerate_class_group(model: CurveModel) -> ClassGroup:
    return ClassGroup(model)


def class_of_place_difference(p: Place | str, o: Place | str, model: CurveModel) -> MumfordClass:
    return enumerate_class_group(model).place_difference(p, o)


def to_vector(c: MumfordClass, cg: ClassGroup) -> tuple[int, ...]:
    return cg.to_vector(c)


def compose_reduce(a: MumfordClass, b: MumfordClass, model: CurveModel) -> MumfordClass:
    return enumerate_class_group(model).jac.add(a, b)


__all__ = [
    "ClassGroup",
    "ClassGroupError",
    "InvalidModelError",
    "Jacobian",
    "MumfordClass",
    "NormalizedModel",
    "class_of_place_difference",
    "compose_reduce",
    "enumerate_class_group",
    "normalize_model",
    "to_vector",
]

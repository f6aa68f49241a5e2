"""Dense univariate polynomials over a FieldSpec.

The workhorse representation is a little-endian tuple of field ints with no
trailing zeros; the zero polynomial is ``()`` and has degree -1.  The free
functions below operate on such tuples and are what the curve and Jacobian
code calls in inner loops.  ``Polynomial`` is a thin operator-friendly wrapper.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .field import FieldError, FieldSpec

Coeffs = tuple[int, ...]
ZERO: Coeffs = ()
ONE: Coeffs = (1,)
X: Coeffs = (0, 1)


def trim(a) -> Coeffs:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def deg(a: Coeffs) -> int:
    return len(a) - 1


def lead(a: Coeffs) -> int:
    return a[-1] if a else 0


def coeff(a: Coeffs, i: int) -> int:
    return a[i] if 0 <= i < len(a) else 0


def padd(F: FieldSpec, a: Coeffs, b: Coeffs) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    add = F.add
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add[out[i]][c]
    return trim(out)


def pneg(F: FieldSpec, a: Coeffs) -> Coeffs:
    neg = F.neg_
    return tuple(neg[c] for c in a)


def psub(F: FieldSpec, a: Coeffs, b: Coeffs) -> Coeffs:
    return padd(F, a, pneg(F, b))


def pscale(F: FieldSpec, a: Coeffs, c: int) -> Coeffs:
    if c == 0:
        return ZERO
    row = F.mul[c]
    return tuple(row[x] for x in a)


def pmul(F: FieldSpec, a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ZERO
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j]][row[y]]
    return trim(out)


def pdivmod(F: FieldSpec, a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return ZERO, a
    add, mul, neg = F.add, F.mul, F.neg_
    inv_lead = F.inv_[b[-1]]
    r = list(a)
    qt = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c:
            t = mul[c][inv_lead]
            qt[i - db] = t
            nt = neg[t]
            row = mul[nt]
            for j in range(db + 1):
                if b[j]:
                    r[i - db + j] = add[r[i - db + j]][row[b[j]]]
    return trim(qt), trim(r[:db])


def pmod(F: FieldSpec, a: Coeffs, b: Coeffs) -> Coeffs:
    return pdivmod(F, a, b)[1]


def pdiv_exact(F: FieldSpec, a: Coeffs, b: Coeffs) -> Coeffs:
    qt, r = pdivmod(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return qt


def pmonic(F: FieldSpec, a: Coeffs) -> Coeffs:
    if not a or a[-1] == 1:
        return a
    return pscale(F, a, F.inv_[a[-1]])


def pgcd(F: FieldSpec, a: Coeffs, b: Coeffs) -> Coeffs:
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pxgcd(F: FieldSpec, a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs, Coeffs]:
    """Return (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        qt, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(F, s0, pmul(F, qt, s1))
        t0, t1 = t1, psub(F, t0, pmul(F, qt, t1))
    if not r0:
        return ZERO, ZERO, ZERO
    c = F.inv_[r0[-1]]
    return pscale(F, r0, c), pscale(F, s0, c), pscale(F, t0, c)


def peval(F: FieldSpec, a: Coeffs, x: int) -> int:
    add, mulx = F.add, F.mul[x]
    acc = 0
    for c in reversed(a):
        acc = add[mulx[acc]][c]
    return acc


def pderiv(F: FieldSpec, a: Coeffs) -> Coeffs:
    return trim(F.mul[F.from_int(i)][c] for i, c in enumerate(a) if i > 0)


def ppow(F: FieldSpec, a: Coeffs, k: int) -> Coeffs:
    result, base = ONE, a
    while k:
        if k & 1:
            result = pmul(F, result, base)
        base = pmul(F, base, base)
        k >>= 1
    return result


def ppow_mod(F: FieldSpec, a: Coeffs, k: int, m: Coeffs) -> Coeffs:
    result, base = pmod(F, ONE, m), pmod(F, a, m)
    while k:
        if k & 1:
            result = pmod(F, pmul(F, result, base), m)
        base = pmod(F, pmul(F, base, base), m)
        k >>= 1
    return result


def pshift(F: FieldSpec, a: Coeffs, t: int) -> Coeffs:
    """a(x + t)."""
    out: Coeffs = ZERO
    lin = trim((t, 1))
    for c in reversed(a):
        out = padd(F, pmul(F, out, lin), (c,) if c else ZERO)
    return out


def pscale_var(F: FieldSpec, a: Coeffs, lam: int) -> Coeffs:
    """a(lam * x)."""
    out, pw = [], 1
    for c in a:
        out.append(F.mul[c][pw])
        pw = F.mul[pw][lam]
    return trim(out)


def preverse(a: Coeffs, n: int) -> Coeffs:
    """x^n * a(1/x) for deg a <= n."""
    if len(a) - 1 > n:
        raise ValueError("degree exceeds reversal length")
    padded = tuple(a) + (0,) * (n + 1 - len(a))
    return trim(padded[::-1])


def is_squarefree(F: FieldSpec, f: Coeffs) -> bool:
    if not f:
        raise ValueError("is_squarefree of the zero polynomial")
    if len(f) == 1:
        return True
    df = pderiv(F, f)
    if not df:
        return False
    return len(pgcd(F, f, df)) == 1


def roots_in_field(F: FieldSpec, f: Coeffs) -> list[tuple[int, int]]:
    if not f:
        raise ValueError("roots of the zero polynomial")
    out = []
    for x in range(F.q):
        if peval(F, f, x) == 0:
            lin = (F.neg_[x], 1)
            mult, g = 0, f
            while g:
                qt, r = pdivmod(F, g, lin)
                if r:
                    break
                mult, g = mult + 1, qt
            out.append((x, mult))
    return out


# -- text format ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(\S))")


def _tokenize(text: str) -> list[str]:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        toks.append(m.group(m.lastindex))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, F: FieldSpec, text: str, var: str | None):
        self.F, self.var = F, var
        self.toks = _tokenize(text)
        self.i = 0
        if not self.toks:
            raise FieldError("empty expression")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise FieldError(f"parse error near token {tok!r}, expected {expect!r}")
        self.i += 1
        return tok

    def parse(self) -> Coeffs:
        out = self.expr()
        if self.peek() is not None:
            raise FieldError(f"trailing input at {self.peek()!r}")
        return out

    def expr(self) -> Coeffs:
        F = self.F
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = pneg(F, acc)
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            acc = padd(F, acc, t) if op == "+" else psub(F, acc, t)
        return acc

    def term(self) -> Coeffs:
        acc = self.factor()
        while self.peek() == "*":
            self.take()
            acc = pmul(self.F, acc, self.factor())
        return acc

    def factor(self) -> Coeffs:
        F = self.F
        tok = self.take()
        if tok == "(":
            base = self.expr()
            self.take(")")
        elif tok == "-":
            base = pneg(F, self.factor())
        elif tok.isdigit():
            base = trim((F.from_int(int(tok)),))
        elif tok == F.label and F.n > 1:
            base = trim((F.alpha,))
        elif self.var is not None and tok == self.var:
            base = X
        else:
            raise FieldError(f"unknown symbol {tok!r}")
        if self.peek() == "^":
            self.take()
            k = int(self.take())
            if tok == F.label and len(base) == 1:
                return trim((F.pow(base[0], k),))
            return ppow(F, base, k)
        return base


def parse_poly(F: FieldSpec, text: str, var: str | None = "x") -> Coeffs:
    return _Parser(F, text, var).parse()


def format_poly(F: FieldSpec, a: Coeffs, var: str = "x") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        cs = F.format(c)
        if "+" in cs:
            cs = f"({cs})"
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(cs)
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return "+".join(terms)


@dataclass(frozen=True)
class Polynomial:
    field: FieldSpec
    coeffs: Coeffs

    @classmethod
    def parse(cls, F: FieldSpec, text: str) -> "Polynomial":
        return cls(F, parse_poly(F, text))

    @property
    def degree(self) -> int:
        return deg(self.coeffs)

    def _c(self, other) -> Coeffs:
        if isinstance(other, Polynomial):
            return other.coeffs
        if isinstance(other, int):
            return trim((self.field.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        return Polynomial(self.field, padd(self.field, self.coeffs, self._c(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Polynomial(self.field, psub(self.field, self.coeffs, self._c(other)))

    def __neg__(self):
        return Polynomial(self.field, pneg(self.field, self.coeffs))

    def __mul__(self, other):
        return Polynomial(self.field, pmul(self.field, self.coeffs, self._c(other)))

    __rmul__ = __mul__

    def __divmod__(self, other):
        qt, r = pdivmod(self.field, self.coeffs, self._c(other))
        return Polynomial(self.field, qt), Polynomial(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, k: int):
        return Polynomial(self.field, ppow(self.field, self.coeffs, k))

    def __call__(self, x: int) -> int:
        return peval(self.field, self.coeffs, x)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.field, pgcd(self.field, self.coeffs, other.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial(self.field, pderiv(self.field, self.coeffs))

    def pow_mod(self, k: int, m: "Polynomial") -> "Polynomial":
        return Polynomial(self.field, ppow_mod(self.field, self.coeffs, k, m.coeffs))

    def is_squarefree(self) -> bool:
        return is_squarefree(self.field, self.coeffs)

    def roots(self) -> list[tuple[int, int]]:
        return roots_in_field(self.field, self.coeffs)

    def __str__(self):
        return format_poly(self.field, self.coeffs)

"""Finite fields F_q with q = p^n <= 16.

Elements are plain ints: the coefficient vector (c_0, ..., c_{n-1}) of
c_0 + c_1*a + ... over F_p is encoded as sum(c_i * p**i).  All arithmetic
goes through small precomputed tables, so element operations are list
lookups.  ``FieldElement`` wraps an int for the operator-style API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)

# little-endian monic moduli over F_p
DEFAULT_MODULI = {
    4: (1, 1, 1),  # a^2 + a + 1
    8: (1, 1, 0, 1),  # a^3 + a + 1
    9: (2, 2, 1),  # a^2 - a - 1
    16: (1, 1, 0, 0, 1),  # a^4 + a + 1
}


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _fp_polymod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    """Remainder of a by the monic m over F_p."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]] + [0] * max(0, dm - len(a))


def _fp_is_irreducible(m: tuple[int, ...], p: int) -> bool:
    # exhaustive trial division by monic polynomials of degree <= n/2
    n = len(m) - 1
    for d in range(1, n // 2 + 1):
        for idx in range(p**d):
            cand = [(idx // p**i) % p for i in range(d)] + [1]
            if not any(_fp_polymod(list(m), tuple(cand), p)):
                return False
    return True


class FieldSpec:
    """The field F_p[a]/(modulus) with lookup tables for every operation."""

    def __init__(self, p: int, n: int = 1, modulus: tuple[int, ...] | None = None, label: str = "a"):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if n < 1 or p**n not in SUPPORTED_ORDERS:
            raise FieldError(f"q = {p}^{n} is outside the supported range {SUPPORTED_ORDERS}")
        if n == 1:
            modulus = None
        else:
            if modulus is None:
                modulus = DEFAULT_MODULI[p**n]
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise FieldError("modulus must be monic of degree n")
            if not _fp_is_irreducible(modulus, p):
                raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p, self.n, self.q = p, n, p**n
        self.modulus = modulus
        self.label = label
        self._build_tables()

    # -- construction ------------------------------------------------------
    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.q
        self.digits = [tuple((x // p**i) % p for i in range(n)) for x in range(q)]
        enc = [p**i for i in range(n)]

        def encode(vec):
            return sum(c * e for c, e in zip(vec, enc))

        def vec_mul(a, b):
            prod = [0] * (2 * n - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        prod[i + j] += ai * bj
            if n == 1:
                return [prod[0] % p]
            return _fp_polymod(prod, self.modulus, p)

        D = self.digits
        self.add = [[encode([(x + y) % p for x, y in zip(D[a], D[b])]) for b in range(q)] for a in range(q)]
        self.neg_ = [encode([(-x) % p for x in D[a]]) for a in range(q)]
        self.sub = [[self.add[a][self.neg_[b]] for b in range(q)] for a in range(q)]
        self.mul = [[encode(vec_mul(D[a], D[b])) for b in range(q)] for a in range(q)]
        inv = [None] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul[a][b] == 1:
                    inv[a] = b
                    break
        self.inv_ = inv

        # generator used for log tables: a itself when primitive, else the least primitive element
        self.alpha = p if n > 1 else None
        self.alpha_is_primitive = n > 1 and self._order(p) == q - 1
        if self.alpha_is_primitive:
            g = p
        else:
            g = next(x for x in range(2 if q > 2 else 1, q) if self._order(x) == q - 1)
        self.gen = g
        self.exp_ = [1] * (q - 1)
        for i in range(1, q - 1):
            self.exp_[i] = self.mul[self.exp_[i - 1]][g]
        self.log_ = [None] * q
        for i, x in enumerate(self.exp_):
            self.log_[x] = i

        roots: dict[int, list[int]] = {a: [] for a in range(q)}
        for y in range(q):
            roots[self.mul[y][y]].append(y)
        self.sqrt_ = [min(roots[a]) if roots[a] else None for a in range(q)]
        self._as_cache: dict[tuple[int, int], int | None] = {}

    def _order(self, x: int) -> int:
        y, k = x, 1
        while y != 1:
            y = self.mul[y][x]
            k += 1
            if k > self.q:
                return 0
        return k

    # -- scalar operations on ints ------------------------------------------
    def neg(self, a: int) -> int:
        return self.neg_[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero in finite field")
        return self.inv_[a]

    def div(self, a: int, b: int) -> int:
        return self.mul[a][self.inv(b)]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul[result][base]
            base = self.mul[base][base]
            k >>= 1
        return result

    def from_int(self, k: int) -> int:
        """Image of the integer k under Z -> F_p -> F_q."""
        return k % self.p

    def elements(self) -> list[int]:
        return list(range(self.q))

    def is_square(self, a: int) -> bool:
        return self.sqrt_[a] is not None

    def sqrt(self, a: int) -> int | None:
        """Canonical square root (smaller integer code) or None for non-squares."""
        if self.p == 2:
            raise FieldError("sqrt is for odd characteristic; use frobenius_root in characteristic 2")
        return self.sqrt_[a]

    def frobenius_root(self, a: int) -> int:
        """The unique square root in characteristic 2."""
        if self.p != 2:
            raise FieldError("frobenius_root needs characteristic 2")
        return self.sqrt_[a]

    def artin_schreier_solve(self, c: int, d: int) -> int | None:
        """Least solution y of y^2 + c*y = d, or None; the other solution is y + c."""
        if self.p != 2:
            raise FieldError("artin_schreier_solve needs characteristic 2")
        key = (c, d)
        if key not in self._as_cache:
            mul, add = self.mul, self.add
            sol = None
            for y in range(self.q):
                if add[mul[y][y]][mul[c][y]] == d:
                    sol = y
                    break
            self._as_cache[key] = sol
        return self._as_cache[key]

    # -- printing / parsing ---------------------------------------------------
    def format(self, a: int) -> str:
        if a < self.p:
            return str(a)
        if self.alpha_is_primitive:
            k = self.discrete_log_alpha(a)
            return self.label if k == 1 else f"{self.label}^{k}"
        terms = []
        for i in range(self.n - 1, -1, -1):
            c = self.digits[a][i]
            if not c:
                continue
            mono = "" if i == 0 else (self.label if i == 1 else f"{self.label}^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms)

    def discrete_log_alpha(self, a: int) -> int:
        # log base a; valid only when a is primitive
        return self.log_[a] if self.gen == self.alpha else None

    def parse(self, text: str) -> int:
        from .poly import parse_poly

        coeffs = parse_poly(self, text, var=None)
        if len(coeffs) > 1:
            raise FieldError(f"not a field element: {text!r}")
        return coeffs[0] if coeffs else 0

    def spec_text(self) -> str:
        if self.n == 1 or self.modulus == DEFAULT_MODULI.get(self.q):
            return f"q={self.q}"
        return f"q={self.q};mod={self.modulus_text()}"

    def modulus_text(self) -> str | None:
        if self.modulus is None:
            return None
        terms = []
        for i in range(self.n, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.label if i == 1 else f"{self.label}^{i}")
            terms.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return "+".join(terms)

    def element(self, a: int | str) -> "FieldElement":
        if isinstance(a, str):
            a = self.parse(a)
        return FieldElement(self, a)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"FieldSpec({self.spec_text()})"

    def __reduce__(self):
        return (make_field, (self.p, self.n, self.modulus))


@lru_cache(maxsize=None)
def make_field(p: int, n: int = 1, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    if modulus is not None:
        modulus = tuple(modulus)
    return FieldSpec(p, n, modulus)


def field_for_order(q: int, modulus: tuple[int, ...] | None = None) -> FieldSpec:
    for p in (2, 3, 5, 7, 11, 13):
        n = 1
        while p**n < q:
            n += 1
        if p**n == q:
            return make_field(p, n, modulus)
    raise FieldError(f"q = {q} is not a supported prime power")


def _modulus_from_text(p: int, n: int, text: str) -> tuple[int, ...]:
    # parse "a^4+a+1" over F_p into little-endian integer coefficients
    fp = make_field(p, 1)
    from .poly import parse_poly

    coeffs = parse_poly(fp, text.replace("a", "x"), var="x")
    if len(coeffs) != n + 1:
        raise FieldError(f"modulus {text!r} does not have degree {n}")
    return tuple(coeffs)


def parse_field_spec(text: str) -> FieldSpec:
    """Parse 'q=16' or 'q=16;mod=a^4+a+1'."""
    parts = dict(part.strip().split("=", 1) for part in text.split(";") if part.strip())
    if "q" not in parts:
        raise FieldError(f"field spec {text!r} lacks q=")
    q = int(parts["q"])
    F = field_for_order(q)
    if "mod" in parts and parts["mod"]:
        return make_field(F.p, F.n, _modulus_from_text(F.p, F.n, parts["mod"]))
    return F


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add[self.value][self._coerce(other)])

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub[self.value][self._coerce(other)])

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub[self._coerce(other)][self.value])

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul[self.value][self._coerce(other)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.format(self.value)


def enumerate_elements(F: FieldSpec) -> list[FieldElement]:
    return [FieldElement(F, x) for x in range(F.q)]


# -- extension fields F_{q^k}, vectorised for point counting -----------------


def _fp_powmod_x(e: int, m: tuple[int, ...], p: int) -> list[int]:
    """x^e mod m over F_p."""
    result = [1]
    base = [0, 1]
    while e:
        if e & 1:
            result = _fp_polymod(_fp_polymul(result, base, p), m, p)
        base = _fp_polymod(_fp_polymul(base, base, p), m, p)
        e >>= 1
    return result


def _fp_polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_one(v):
    return v[0] == 1 and not any(v[1:])


@lru_cache(maxsize=None)
def _primitive_modulus(p: int, m: int) -> tuple[int, ...]:
    Q = p**m
    factors = _prime_factors(Q - 1)
    for idx in range(p**m):
        cand = tuple((idx // p**i) % p for i in range(m)) + (1,)
        if cand[0] == 0:
            continue
        if not _is_one(_fp_powmod_x(Q - 1, cand, p)):
            continue
        if all(not _is_one(_fp_powmod_x((Q - 1) // r, cand, p)) for r in factors):
            return cand
    raise FieldError(f"no primitive polynomial of degree {m} over F_{p}")


class ExtensionField:
    """F_{q^k} as F_p[t]/(primitive M), with numpy tables and an embedding of F_q."""

    def __init__(self, base: FieldSpec, k: int):
        p, m = base.p, base.n * k
        self.base, self.k, self.p, self.m = base, k, p, m
        self.Q = Q = p**m
        M = _primitive_modulus(p, m)
        # exp table by repeated multiplication by t on digit vectors
        exp = np.empty(Q - 1, dtype=np.int64)
        vec = [1] + [0] * (m - 1)
        powers = [p**i for i in range(m)]
        for i in range(Q - 1):
            exp[i] = sum(c * w for c, w in zip(vec, powers))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                vec = [(c - top * M[j]) % p for j, c in enumerate(vec)]
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(Q - 1)
        self.exp, self.log = exp, log
        ar = np.arange(Q)
        self.digits = np.stack([(ar // w) % p for w in powers], axis=1) if p != 2 else None
        self.powers = np.array(powers, dtype=np.int64)
        self.embed = self._embedding()
        if p == 2:
            # trace is F_2-linear: precompute it on the bit basis t^i
            mask = 0
            for i in range(m):
                tr, e = 0, i
                for _ in range(m):
                    tr ^= int(exp[e % (Q - 1)])
                    e *= 2
                if tr & 1:
                    mask |= 1 << i
            self.trace_mask = mask

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.powers

    def vmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % (self.Q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def mul1(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.Q - 1)])

    def add1(self, a: int, b: int) -> int:
        return int(self.vadd(np.array([a]), np.array([b]))[0])

    def _embedding(self) -> np.ndarray:
        F = self.base
        if F.n == 1:
            return np.arange(F.q, dtype=np.int64)
        # find a root beta of the base modulus, then send a -> beta
        X = np.arange(self.Q, dtype=np.int64)
        acc = np.zeros(self.Q, dtype=np.int64)
        for c in reversed(F.modulus):
            acc = self.vadd(self.vmul(acc, X), np.full(self.Q, c, dtype=np.int64))
        beta = int(np.flatnonzero(acc == 0)[0])
        emb = np.zeros(F.q, dtype=np.int64)
        for x in range(F.q):
            val, pw = 0, 1
            for c in F.digits[x]:
                if c:
                    val = self.add1(val, self.mul1(c, pw))
                pw = self.mul1(pw, beta)
            emb[x] = val
        return emb

    def eval_poly(self, coeffs, X):
        acc = np.zeros_like(X)
        for c in reversed(coeffs):
            acc = self.vadd(self.vmul(acc, X), np.full_like(X, self.embed[c]))
        return acc

    def quadratic_character(self, z):
        """+1 on non-zero squares, -1 on non-squares, 0 at 0 (odd p)."""
        lz = self.log[z]
        return np.where(z == 0, 0, np.where(lz % 2 == 0, 1, -1))

    def trace(self, z):
        return np.bitwise_count(np.asarray(z) & self.trace_mask) & 1

    def inv(self, z):
        lz = self.log[z]
        return self.exp[(-lz) % (self.Q - 1)]


@lru_cache(maxsize=64)
def extension_field(base: FieldSpec, k: int) -> ExtensionField:
    return ExtensionField(base, k)


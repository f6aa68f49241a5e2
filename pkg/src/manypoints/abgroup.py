"""Finite abelian groups Z/d1 + ... + Z/dr and their subgroups.

A subgroup G is stored as the row-style Hermite normal form of its preimage
lattice in Z^r (generators stacked with the relation rows diag(d_i)).  The
lattice has full rank, so the HNF is an upper-triangular r x r matrix and is
unique; subgroup equality is tuple equality.  The index of G is the
determinant of that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import prod

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


# -- integer normal forms -------------------------------------------------------


def hermite_normal_form(rows: list[list[int]], ncols: int) -> Matrix:
    """Row HNF of a full-rank integer lattice: upper triangular, positive
    diagonal, entries above each pivot reduced into [0, pivot)."""
    work = [list(r) for r in rows if any(r)]
    out = []
    for col in range(ncols):
        # gcd-combine every row with a nonzero entry in this column
        pivot = None
        rest = []
        for r in work:
            if r[col] == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            a, b = pivot[col], r[col]
            g, s, t = _xgcd(a, b)
            new_pivot = [s * x + t * y for x, y in zip(pivot, r)]
            other = [(b // g) * x - (a // g) * y for x, y in zip(pivot, r)]
            pivot = new_pivot
            if any(other):
                rest.append(other)
        if pivot is None:
            raise ValueError("lattice is not of full rank")
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        out.append(pivot)
        work = [r for r in rest if any(r)]
    for i in range(ncols):
        piv = out[i][i]
        for j in range(i):
            c = out[j][i] // piv
            if c:
                out[j] = [x - c * y for x, y in zip(out[j], out[i])]
    return tuple(tuple(r) for r in out)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        qt = a // b
        a, b = b, a - qt * b
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def smith_normal_form(R: list[list[int]]):
    """Return (diag, U, V, Vinv) with U R V = diag(d_1, ..., d_n), d_i | d_{i+1}.

    R is a square integer matrix of full rank.
    """
    n = len(R)
    A = [list(r) for r in R]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_combo(i, j, a, b, c, d):
        # (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j), det = 1
        for M in (A, U):
            ri, rj = M[i], M[j]
            M[i] = [a * x + b * y for x, y in zip(ri, rj)]
            M[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_combo(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j); Vinv gets the inverse row op
        for M in (A, V):
            for r in M:
                x, y = r[i], r[j]
                r[i], r[j] = a * x + b * y, c * x + d * y
        # inverse of [[a, c], [b, d]] acting on rows i, j of Vinv (det = 1)
        ri, rj = Vi[i], Vi[j]
        Vi[i] = [d * x - c * y for x, y in zip(ri, rj)]
        Vi[j] = [-b * x + a * y for x, y in zip(ri, rj)]

    for t in range(n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, n) if A[i][j]]
        if not nz:
            raise ValueError("singular relation matrix")
        _, i, j = min(nz)
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            # every combo below either clears an entry or strictly shrinks |pivot|
            for i in range(t + 1, n):
                a, b = A[t][t], A[i][t]
                if b % a == 0:
                    if b:
                        row_combo(t, i, 1, 0, -(b // a), 1)
                else:
                    g, s, r = _xgcd(a, b)
                    row_combo(t, i, s, r, -(b // g), a // g)
            for j in range(t + 1, n):
                a, b = A[t][t], A[t][j]
                if b % a == 0:
                    if b:
                        col_combo(t, j, 1, 0, -(b // a), 1)
                else:
                    g, s, r = _xgcd(a, b)
                    col_combo(t, j, s, r, -(b // g), a // g)
            if any(A[i][t] for i in range(t + 1, n)):
                continue
            bad = [i for i in range(t + 1, n) for j in range(t + 1, n) if A[i][j] % A[t][t]]
            if bad:
                row_combo(t, bad[0], 1, 1, 0, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return [A[i][i] for i in range(n)], U, V, Vi


# -- groups and subgroups -------------------------------------------------------


@dataclass(frozen=True)
class AbelianStructure:
    invariants: tuple[int, ...]

    def __post_init__(self):
        for d in self.invariants:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.invariants} do not form a divisibility chain")

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        return prod(self.invariants)

    def elements(self) -> list[Vector]:
        return [tuple(v) for v in product(*(range(d) for d in self.invariants))]

    def reduce(self, v) -> Vector:
        return tuple(x % d for x, d in zip(v, self.invariants))

    def add(self, a: Vector, b: Vector) -> Vector:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariants))

    def __str__(self):
        if not self.invariants:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariants)


@dataclass(frozen=True)
class Subgroup:
    structure: AbelianStructure
    hnf: Matrix
    order: int = field(compare=False)
    index: int = field(compare=False)

    def contains(self, v) -> bool:
        if len(v) != self.structure.rank:
            raise ValueError("dimension mismatch")
        return not any(self.coset_key(v))

    def coset_key(self, v) -> Vector:
        """Canonical representative of v + G, so v - w in G iff keys agree."""
        v = list(v)
        for i, row in enumerate(self.hnf):
            c = v[i] // row[i]
            if c:
                v = [x - c * y for x, y in zip(v, row)]
        return tuple(v)

    def generators(self) -> list[Vector]:
        """Nonzero reduced rows of the canonical basis."""
        out = []
        for row in self.hnf:
            red = self.structure.reduce(row)
            if any(red):
                out.append(red)
        return out

    def elements(self) -> list[Vector]:
        return [v for v in self.structure.elements() if self.contains(v)]

    def text(self) -> str:
        gens = ";".join("(" + ",".join(map(str, g)) + ")" for g in self.generators())
        return f"gens=[{gens}]; order={self.order}; index={self.index}"

    def __str__(self):
        return self.text()


def _make_subgroup(structure: AbelianStructure, rows: list[list[int]]) -> Subgroup:
    r = structure.rank
    relations = [[d if i == j else 0 for j in range(r)] for i, d in enumerate(structure.invariants)]
    H = hermite_normal_form(list(rows) + relations, r) if r else ()
    index = prod(H[i][i] for i in range(r))
    return Subgroup(structure, H, structure.order // index, index)


def subgroup_generated(structure: AbelianStructure, generators) -> Subgroup:
    rows = []
    for g in generators:
        if len(g) != structure.rank:
            raise ValueError(f"generator {g} has length {len(g)}, expected {structure.rank}")
        rows.append(list(structure.reduce(g)))
    return _make_subgroup(structure, rows)


def index(G: Subgroup) -> int:
    return G.index


def contains(G: Subgroup, v) -> bool:
    return G.contains(v)


def join(G: Subgroup, H: Subgroup) -> Subgroup:
    return _make_subgroup(G.structure, [list(r) for r in G.hnf] + [list(r) for r in H.hnf])


def _factorize(n: int) -> dict[int, int]:
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _primary_elements(structure: AbelianStructure, p: int) -> list[Vector]:
    """Elements of the p-primary part, as vectors of the whole group."""
    axes = []
    for d in structure.invariants:
        pe = 1
        while d % (pe * p) == 0:
            pe *= p
        step = d // pe
        axes.append([step * k for k in range(pe)])
    return [tuple(v) for v in product(*axes)]


MAX_ORDER = 10_000


@lru_cache(maxsize=512)
def all_subgroups(structure: AbelianStructure) -> tuple[Subgroup, ...]:
    """Every subgroup exactly once, sorted by (index, canonical matrix)."""
    if structure.order > MAX_ORDER:
        raise ValueError(f"group order {structure.order} exceeds {MAX_ORDER}")
    trivial = subgroup_generated(structure, [])
    per_prime = []
    for p in sorted(_factorize(structure.order)):
        elems = _primary_elements(structure, p)
        seen = {trivial.hnf: trivial}
        frontier = [trivial]
        while frontier:
            nxt = []
            for G in frontier:
                for x in elems:
                    if G.contains(x):
                        continue
                    J = _make_subgroup(structure, [list(r) for r in G.hnf] + [list(x)])
                    if J.hnf not in seen:
                        seen[J.hnf] = J
                        nxt.append(J)
            frontier = nxt
        per_prime.append(list(seen.values()))
    subs = {}
    for combo in product(*per_prime):
        rows = [list(r) for G in combo for r in G.hnf]
        S = _make_subgroup(structure, rows) if rows else trivial
        subs[S.hnf] = S
    return tuple(sorted(subs.values(), key=lambda S: (S.index, S.hnf)))

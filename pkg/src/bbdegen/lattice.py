"""Exact integer and rational linear algebra on small dense matrices.

Vectors are tuples, matrices are lists of row tuples.  Entries are Python
ints or ``fractions.Fraction``; nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from operator import mul
from typing import Iterable, Sequence

Vector = tuple
Matrix = list


def dot(a: Sequence, b: Sequence):
    return sum(map(mul, a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def neg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def zero(d: int) -> tuple:
    return (0,) * d


def unit(d: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(d))


def normalize(x):
    """Return an int when a rational is integral, otherwise the Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def as_fraction_vector(v: Iterable) -> tuple:
    return tuple(normalize(Fraction(x)) for x in v)


def is_integral(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(a, b)


def common_denominator(v: Iterable) -> int:
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return den


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence) -> tuple:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    den = common_denominator(v)
    w = [int(Fraction(x) * den) for x in v]
    g = vector_gcd(w)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)


def integer_scaling(v: Sequence) -> tuple:
    """Clear denominators of a rational vector without reducing by the gcd."""
    den = common_denominator(v)
    return tuple(int(Fraction(x) * den) for x in v)


def canonical_sign(v: Sequence) -> tuple:
    """Flip sign so that the leading nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else neg(v)
    return tuple(v)


def mat_vec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in A)


def transpose(A: Sequence[Sequence]) -> list:
    if not A:
        return []
    return [tuple(col) for col in zip(*A)]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = transpose(B)
    return [tuple(dot(row, col) for col in Bt) for row in A]


def identity(d: int) -> list:
    return [unit(d, i) for i in range(d)]


def rref(rows: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, len(M)):
            if M[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(row) for row in M[:r]], pivots


def _int_rank(rows: list) -> int:
    """Rank of integer rows by fraction-free elimination."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        pc = p[c]
        for i in range(r + 1, len(rows)):
            q = rows[i][c]
            if q:
                rows[i] = [pc * x - q * y for x, y in zip(rows[i], p)]
                g = 0
                for x in rows[i]:
                    if x:
                        g = gcd(g, x)
                if g > 1:
                    rows[i] = [x // g for x in rows[i]]
        r += 1
        if r == len(rows):
            break
    return r


def rank(rows: Sequence[Sequence]) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    if all(type(x) is int for row in rows for x in row):
        return _int_rank(rows)
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Primitive integer basis of {x : A x = 0}."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    R, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, piv):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def row_space_basis(rows: Sequence[Sequence]) -> list:
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    R, _ = rref(rows)
    return [primitive(r) for r in R]


def solve(A: Sequence[Sequence], b: Sequence):
    """Some rational solution x of A x = b, or None if inconsistent."""
    if not A:
        return None if any(b) else ()
    ncols = len(A[0])
    aug = [tuple(row) + (bi,) for row, bi in zip(A, b)]
    R, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, piv):
        x[p] = row[-1]
    return tuple(normalize(v) for v in x)


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return solve(transpose(basis), v) is not None


def inverse(A: Sequence[Sequence]) -> list:
    n = len(A)
    aug = [tuple(A[i]) + unit(n, i) for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [tuple(normalize(x) for x in row[n:]) for row in R]


def det(A: Sequence[Sequence]):
    n = len(A)
    if n == 0:
        return 1
    M = [[Fraction(x) for x in r] for r in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return normalize(d)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def row_echelon_transform(vectors: Sequence[Sequence[int]], d: int) -> tuple[list, int]:
    """Unimodular W with W V in echelon form, V having the given vectors as columns.

    Returns (W, rank).  Rows rank.. of W annihilate every input vector, and the
    first rank rows together with the remaining ones form a basis of Z^d.
    """
    cols = [tuple(int(x) for x in v) for v in vectors]
    M = [list(row) for row in zip(*cols)] if cols else [[] for _ in range(d)]
    W = [list(unit(d, i)) for i in range(d)]
    r = 0
    for c in range(len(cols)):
        if r >= d:
            break
        for i in range(r + 1, d):
            if M[i][c] == 0:
                continue
            a, b = M[r][c], M[i][c]
            g, x, y = _xgcd(a, b)
            ua, ub = a // g, b // g
            Mr, Mi = M[r], M[i]
            M[r] = [x * p + y * q for p, q in zip(Mr, Mi)]
            M[i] = [-ub * p + ua * q for p, q in zip(Mr, Mi)]
            Wr, Wi = W[r], W[i]
            W[r] = [x * p + y * q for p, q in zip(Wr, Wi)]
            W[i] = [-ub * p + ua * q for p, q in zip(Wr, Wi)]
        if M[r][c] != 0:
            if M[r][c] < 0:
                M[r] = [-t for t in M[r]]
                W[r] = [-t for t in W[r]]
            r += 1
    return [tuple(w) for w in W], r


class QuotientLattice:
    """The lattice Z^d / (Z^d ∩ Span(vectors)) with an explicit unimodular basis.

    ``U`` is unimodular; its first ``k`` columns span the saturated sublattice,
    and the quotient map is ``x -> (W x)[k:]`` with ``W = U^{-1}``.
    """

    def __init__(self, vectors: Sequence[Sequence], d: int):
        ints = [primitive(v) for v in vectors if any(v)]
        W, k = row_echelon_transform(ints, d)
        self.d = d
        self.k = k
        self.W = W
        self.U = [tuple(int(x) for x in row) for row in inverse(W)]

    @property
    def rank(self) -> int:
        return self.d - self.k

    def project(self, x: Sequence) -> tuple:
        return tuple(normalize(Fraction(dot(row, x))) for row in self.W[self.k:])

    def lift(self, y: Sequence) -> tuple:
        """A representative in Z^d (or Q^d) of a quotient vector."""
        cols = transpose(self.U)[self.k:]
        out = [0] * self.d
        for c, yi in zip(cols, y):
            for j in range(self.d):
                out[j] += c[j] * yi
        return tuple(normalize(Fraction(x)) for x in out)

    def sub_basis(self) -> list:
        return transpose(self.U)[: self.k]

    def quotient_basis(self) -> list:
        return transpose(self.U)[self.k:]

    def dual_basis(self) -> list:
        """Covectors on Z^d pulled back from the standard dual basis of the quotient."""
        return list(self.W[self.k:])


def smith_invariants(rows: Sequence[Sequence[int]]) -> list:
    """Nonzero invariant factors of an integer matrix."""
    M = [list(int(x) for x in r) for r in rows]
    if not M or not M[0]:
        return []
    m, n = len(M), len(M[0])
    out = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            p = M[t][t]
            for i in range(t + 1, m):
                q = M[i][t] // p
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = M[t][j] // p
                if q:
                    for row in M:
                        row[j] -= q * row[t]
                if M[t][j]:
                    done = False
            if done:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if M[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                M[t] = [a + b for a, b in zip(M[t], M[bad])]
                continue
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if (i == t or j == t) and M[i][j] and (
                        best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])
                    ):
                        best = (i, j)
            i, j = best
            M[t], M[i] = M[i], M[t]
            for row in M:
                row[t], row[j] = row[j], row[t]
        out.append(abs(M[t][t]))
        t += 1
    return out

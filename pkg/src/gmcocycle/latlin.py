"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples holding Python ints (or Fractions where
noted), so every value is hashable and exact.
"""
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, InputError, Singular, ZeroVector


def as_matrix(obj, rational=False):
    """Validate a nested sequence and return it as a tuple of row tuples."""
    try:
        rows = [list(r) for r in obj]
    except TypeError as err:
        raise InputError(f"not a matrix: {obj!r}") from err
    if not rows or not rows[0]:
        raise InputError("matrix must have positive dimensions")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DimensionMismatch("ragged matrix")
    conv = to_fraction if rational else _to_int
    return tuple(tuple(conv(x) for x in r) for r in rows)


def _to_int(x):
    if isinstance(x, bool):
        raise InputError(f"not an integer: {x!r}")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    raise InputError(f"not an integer: {x!r}")


def to_fraction(x):
    """Exact conversion from int, Fraction or a 'p/q' string."""
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise InputError(f"not a rational: {x!r}") from err
    raise InputError(f"not an exact rational: {x!r}")


def mod1(x):
    """Canonical representative of a rational in [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A):
    return tuple(zip(*A))


def columns(A):
    return [tuple(c) for c in zip(*A)]


def from_columns(cols):
    return tuple(zip(*cols))


def matmul(A, B):
    if len(A[0]) != len(B):
        raise DimensionMismatch("inner dimensions differ")
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    if len(A[0]) != len(v):
        raise DimensionMismatch("matrix/vector sizes differ")
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def scale(c, A):
    return tuple(tuple(c * x for x in row) for row in A)


def det(A):
    """Determinant of a square matrix (Bareiss for ints, elimination otherwise)."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionMismatch("determinant of a non-square matrix")
    if all(isinstance(x, int) for r in A for x in r):
        return _det_bareiss(A)
    M = [[Fraction(x) for x in r] for r in A]
    sign = 1
    d = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        d *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                for j in range(k, n):
                    M[i][j] -= f * M[k][j]
    return sign * d


def _det_bareiss(A):
    n = len(A)
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if piv is None:
                return 0
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A):
    M = [[Fraction(x) for x in r] for r in A]
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            f = M[i][c] / M[r][c]
            if f:
                for j in range(c, cols):
                    M[i][j] -= f * M[r][j]
        r += 1
        if r == rows:
            break
    return r


def inverse(A):
    """Exact inverse over Q as a matrix of Fractions."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionMismatch("inverse of a non-square matrix")
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def adjugate(A):
    """Integer adjugate, adj(A)·A = det(A)·I."""
    d = det(A)
    if d == 0:
        # cofactor expansion is only needed for the nonsingular case here
        raise Singular("adjugate requested for a singular matrix")
    inv = inverse(A)
    return tuple(tuple(int(d * x) for x in row) for row in inv)


def primitive(v):
    """Split a nonzero integer vector as content * ray with gcd(ray) = 1."""
    v = tuple(_to_int(x) for x in v)
    c = 0
    for x in v:
        c = gcd(c, x)
    if c == 0:
        raise ZeroVector("zero vector has no primitive direction")
    return tuple(x // c for x in v), c


def primitive_rational(v):
    """Primitive integer vector on the positive ray through a rational vector."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    return primitive([int(x * den) for x in v])[0]


class SNF(NamedTuple):
    U: tuple
    S: tuple
    V: tuple

    @property
    def diagonal(self):
        return tuple(self.S[i][i] for i in range(min(len(self.S), len(self.S[0]))))


def snf(A):
    """Smith normal form U·A·V = S.

    Pivot choice is the smallest nonzero |entry| of the active block, ties
    broken by row-major position, so the transforms are deterministic.
    """
    A = as_matrix(A)
    m, n = len(A), len(A[0])
    S = [list(r) for r in A]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (S, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for M in (S, V):
            for r in M:
                r[dst] -= q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = S[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, S[i][t] // p)
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, S[t][j] // p)
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % p), None)
            if bad is None:
                break
            # fold an offending row into the pivot row and retry
            add_row(t, bad[0], -1)
        if best is None:
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return SNF(tuple(map(tuple, U)), tuple(map(tuple, S)), tuple(map(tuple, V)))


def hnf_rows(rows, ncols=None):
    """Row-style Hermite normal form of the lattice spanned by integer rows.

    Returns the nonzero rows, upper echelon, positive pivots, entries above a
    pivot reduced into [0, pivot).
    """
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0])
    out = []
    r = 0
    for c in range(ncols):
        # gcd-combine column c into row r
        live = [i for i in range(r, len(M)) if M[i][c] != 0]
        if not live:
            continue
        while True:
            live = [i for i in range(r, len(M)) if M[i][c] != 0]
            k = min(live, key=lambda i: (abs(M[i][c]), i))
            M[r], M[k] = M[k], M[r]
            done = True
            for i in range(r + 1, len(M)):
                if M[i][c]:
                    q = M[i][c] // M[r][c]
                    M[i] = [a - q * b for a, b in zip(M[i], M[r])]
                    done = done and M[i][c] == 0
            if done:
                break
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
    out = [tuple(row) for row in M[:r]]
    return tuple(out)


def torsion_fiber(M, a):
    """All b in (Q/Z)^n with M·b = a mod Z^n, sorted, as tuples of Fractions."""
    M = as_matrix(M)
    n = len(M)
    if len(M[0]) != n:
        raise DimensionMismatch("torsion fiber needs a square matrix")
    if len(a) != n:
        raise DimensionMismatch("torsion point has the wrong length")
    if det(M) == 0:
        raise Singular("torsion fiber of a singular map")
    U, S, V = snf(M)
    s = [S[i][i] for i in range(n)]
    ua = matvec(U, tuple(Fraction(x) for x in a))
    pts = set()
    for t in product(*(range(d) for d in s)):
        y = [(ua[i] + t[i]) / s[i] for i in range(n)]
        b = matvec(V, y)
        pts.add(tuple(mod1(x) for x in b))
    return sorted(pts)


def kernel_exponents(M):
    """Kernel of the monomial map M on torsion, as integer exponents.

    Returns (L, K) with K an int64 array of shape (|det M|, n) such that the
    kernel points are K / L mod 1, where L is the largest invariant factor.
    """
    M = as_matrix(M)
    n = len(M)
    U, S, V = snf(M)
    s = [S[i][i] for i in range(n)]
    if 0 in s:
        raise Singular("kernel of a singular map")
    L = s[-1]
    grids = np.indices(s, dtype=np.int64).reshape(n, -1)
    steps = np.array([L // d for d in s], dtype=np.int64)
    Vn = np.array(V, dtype=object)
    if max(abs(x) for r in V for x in r) * L * n < 2 ** 62:
        Vn = Vn.astype(np.int64)
    K = (Vn @ (grids * steps[:, None])) % L
    return L, np.ascontiguousarray(K.T.astype(np.int64))


def hemisphere_witness(rays):
    """A rational v with v·m > 0 for all rays m, or None if none exists.

    Decides the exact feasibility of {v·m >= 1} by Fourier-Motzkin
    elimination over the rationals, then back-substitutes a witness.
    """
    rays = [tuple(_to_int(x) for x in m) for m in rays]
    if not rays:
        raise InputError("empty ray list")
    n = len(rays[0])
    if any(len(m) != n for m in rays):
        raise DimensionMismatch("rays of different lengths")
    if any(not any(m) for m in rays):
        raise ZeroVector("zero ray")
    # constraint: coeffs·v >= rhs
    cons = _dedupe([(tuple(Fraction(x) for x in m), Fraction(1)) for m in rays])
    bounds = []
    for var in reversed(range(n)):
        lower, upper, rest = [], [], []
        for a, b in cons:
            c = a[var]
            if c > 0:
                lower.append((a, b, c))
            elif c < 0:
                upper.append((a, b, c))
            else:
                rest.append((a, b))
        bounds.append((var, lower, upper))
        for al, bl, cl in lower:
            for au, bu, cu in upper:
                a = tuple(x / cl - y / cu for x, y in zip(al, au))
                rest.append((a, bl / cl - bu / cu))
        cons = _dedupe(rest)
    if any(b > 0 for _, b in cons):
        return None
    v = [Fraction(0)] * n
    for var, lower, upper in reversed(bounds):
        # x_var >= (b - sum_{j != var} a_j v_j) / c for c > 0, <= for c < 0
        def bound(a, b, c):
            return (b - sum(a[j] * v[j] for j in range(n) if j != var)) / c
        lo = max((bound(*t) for t in lower), default=None)
        hi = min((bound(*t) for t in upper), default=None)
        v[var] = _pick(lo, hi)
    v = tuple(v)
    assert all(sum(x * y for x, y in zip(v, m)) > 0 for m in rays)
    return v


def _pick(lo, hi):
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return Fraction(-((-lo.numerator) // lo.denominator))  # ceil
    if lo is None:
        return Fraction(hi.numerator // hi.denominator)  # floor
    c = Fraction(-((-lo.numerator) // lo.denominator))
    if c <= hi:
        return c
    return (lo + hi) / 2


def _dedupe(cons):
    seen = {}
    for a, b in cons:
        if not any(a):
            key = (a, b)
        else:
            s = max(abs(x) for x in a)
            a = tuple(x / s for x in a)
            b = b / s
            key = a
            # keep only the tightest rhs for identical left-hand sides
            if key in seen and seen[key][1] >= b:
                continue
        seen[key] = (a, b)
    return list(seen.values())


def is_acyclic(rays):
    return hemisphere_witness(rays) is not None

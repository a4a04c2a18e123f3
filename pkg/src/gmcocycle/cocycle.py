"""The Eisenstein cocycle on matrix tuples, its coboundaries and defects."""
from fractions import Fraction
from math import gcd
from typing import NamedTuple

from . import latlin
from .chains import SimplexGen, realize
from .errors import (DimensionMismatch, EvenDimension, ExtensionDependent, InputError,
                     NonConstantDefect, NonIntegerDefect, Singular)
from .ksym import KElement, act
from .regulator import SamplePlan, compare


def _gammas(t):
    mats = [latlin.as_matrix(g, rational=True) for g in t]
    if not mats:
        raise InputError("empty tuple")
    n = len(mats[0])
    for g in mats:
        if len(g) != n or any(len(r) != n for r in g):
            raise DimensionMismatch("matrices of inconsistent size")
        if latlin.det(g) == 0:
            raise Singular("singular matrix in tuple")
    return mats, n


def columns(t, n=None):
    """(c_{n-1}, ..., c_0) with c_0 = e_1 and c_i the ray of gamma_1···gamma_i e_1."""
    if not t:
        if n != 1:
            raise InputError("an empty tuple only makes sense for n = 1")
        return [(1,)]
    mats, n = _gammas(t)
    if len(mats) != n - 1:
        raise InputError("theta takes a tuple of length n - 1")
    v = tuple(Fraction(int(j == 0)) for j in range(n))
    cols = [tuple(int(x) for x in v)]
    prod = latlin.identity(n)
    for g in mats:
        prod = latlin.matmul(prod, g)
        cols.append(latlin.primitive_rational(latlin.matvec(prod, v)))
    return cols[::-1]


def theta(t, mode="plain", n=None):
    """Cocycle value on an (n-1)-tuple; mode "plain" or "sym" (odd n only)."""
    if t:
        n = _gammas(t)[1]
    if mode not in ("plain", "sym"):
        raise InputError(f"unknown theta mode {mode!r}")
    if mode == "sym" and n % 2 == 0:
        raise EvenDimension("the symmetrized cocycle needs odd n")
    v = realize(SimplexGen.of(columns(t, n)))
    if mode == "sym":
        minus = tuple(tuple(-int(i == j) for j in range(n)) for i in range(n))
        v = (v + act(minus, v)).scaled(Fraction(1, 2))
    return v


def coboundary(f, t):
    """Inhomogeneous coboundary (df)(g_1..g_{d+1}) with left action by act."""
    mats, n = _gammas(t)
    d = len(mats) - 1

    def call(sub, where):
        try:
            return f(sub)
        except ExtensionDependent as err:
            raise ExtensionDependent(f"extension undefined on sub-tuple {where}",
                                     vertices=err.vertices, where=where) from err

    total = act(mats[0], call(mats[1:], "drop first"))
    for i in range(d):
        merged = mats[:i] + [latlin.matmul(mats[i], mats[i + 1])] + mats[i + 2:]
        total = total + call(merged, f"merge {i + 1},{i + 2}").scaled((-1) ** (i + 1))
    total = total + call(mats[:-1], "drop last").scaled((-1) ** (d + 1))
    return total


def euler_defect(t, plan=None):
    """The integer k with d(theta) = k · orientation on the n-tuple t."""
    mats, n = _gammas(t)
    if len(mats) != n:
        raise InputError("euler defect takes a tuple of length n")
    plan = plan or SamplePlan()
    c = coboundary(lambda s: theta(s, "plain"), mats)
    rep = compare(c, KElement.zero(n), plan, mode="mod_orientation")
    if rep.verdict == "Distinct":
        raise NonConstantDefect(f"coboundary is not constant (spread {rep.max_residual:.3e})")
    k = rep.integer_constant(1e-6)
    if k is None:
        raise NonIntegerDefect(f"fitted constant {complex(rep.constant)} is not an integer")
    return k, rep


def defect_coboundary(defect, t):
    """Integer coboundary of an integer n-cochain with the sign character."""
    mats, n = _gammas(t)
    d = len(mats) - 1
    sgn = 1 if latlin.det(mats[0]) > 0 else -1
    total = sgn * defect(mats[1:])
    for i in range(d):
        merged = mats[:i] + [latlin.matmul(mats[i], mats[i + 1])] + mats[i + 2:]
        total += (-1) ** (i + 1) * defect(merged)
    total += (-1) ** (d + 1) * defect(mats[:-1])
    return total


class SullivanResult(NamedTuple):
    value: int
    stabilized: bool
    count: int


def sullivan_d(n, excluded=(), bound=50):
    """gcd of m^n (m^n - 1) over 2 <= m <= bound coprime to the excluded primes."""
    if bound < 2:
        raise InputError("bound must be at least 2")
    if n < 1:
        raise InputError("n must be positive")
    excluded = list(excluded)
    g = 0
    half = 0
    count = 0
    for m in range(2, bound + 1):
        if any(m % p == 0 for p in excluded):
            continue
        g = gcd(g, m ** n * (m ** n - 1))
        count += 1
        if m <= bound // 2:
            half = g
    stabilized = count > 0 and half == g
    return SullivanResult(g, stabilized, count)


def random_unimodular(n, rng, steps=None, bound=3):
    """Random element of GL_n(Z) with entries of absolute value <= bound."""
    steps = steps or 2 * n
    while True:
        g = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(steps):
            kind = rng.integers(3)
            i, j = (int(x) for x in rng.choice(n, 2, replace=False))
            if kind == 0:
                s = int(rng.choice([-1, 1]))
                g[i] = [a + s * b for a, b in zip(g[i], g[j])]
            elif kind == 1:
                g[i], g[j] = g[j], g[i]
            else:
                g[i] = [-a for a in g[i]]
        if max(abs(x) for r in g for x in r) <= bound:
            return tuple(tuple(r) for r in g)


def theta_defined(t):
    try:
        theta(t, "plain")
    except ExtensionDependent:
        return False
    return True


def general_position(t):
    """All theta columns independent on every sub-tuple the coboundary uses."""
    for s in merged_subtuples(t):
        cols = columns(s)
        if latlin.rank(latlin.from_columns(cols)) != len(cols):
            return False
    return True


def merged_subtuples(t):
    mats = list(t)
    d = len(mats) - 1
    out = [mats[1:]]
    for i in range(d):
        out.append(mats[:i] + [latlin.matmul(mats[i], mats[i + 1])] + mats[i + 2:])
    out.append(mats[:-1])
    return out

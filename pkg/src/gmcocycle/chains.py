"""Realization of spherical simplices as symbol elements.

A simplex Delta(m_1, ..., m_k) on rays is sent to the pushforward generator
(m_1 ... m_k)_*{1 - w_1, ..., 1 - w_k}; vertex order carries orientation.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import latlin, rays
from .errors import DimensionMismatch, ExtensionDependent, InputError, NotAcyclic, NotInSpan
from .ksym import KElement, SymbolTerm, generator
from .rays import TupleKind


@dataclass(frozen=True)
class SimplexGen:
    vertices: tuple
    n: int

    @classmethod
    def of(cls, vertices):
        vs = tuple(rays.ray(v) for v in vertices)
        if not vs:
            raise InputError("simplex needs at least one vertex")
        n = len(vs[0])
        if any(len(v) != n for v in vs):
            raise DimensionMismatch("vertices of different dimension")
        if len(vs) > n:
            raise InputError("a simplex has at most n vertices")
        return cls(vs, n)

    @property
    def k(self):
        return len(self.vertices)

    def moved(self, gamma):
        """gamma · s for an integer matrix gamma."""
        return SimplexGen.of([latlin.matvec(gamma, v) for v in self.vertices])


@dataclass(frozen=True)
class GerstenTerm:
    term: SymbolTerm
    stratum: tuple  # reduced row echelon basis of the column span


def stratum_of(vectors):
    """Canonical (RREF over Q) basis of the span of the given vectors."""
    M = [[Fraction(x) for x in v] for v in vectors]
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    return tuple(tuple(row) for row in M[:r])


def _as_simplex(s):
    return s if isinstance(s, SimplexGen) else SimplexGen.of(s)


def realize(s):
    s = _as_simplex(s)
    cls = rays.classify(s.vertices)
    if cls.independent:
        return KElement.of(generator(latlin.from_columns(s.vertices)))
    if cls.kind is TupleKind.DEPENDENT_ACYCLIC:
        return KElement.zero(s.n)
    raise ExtensionDependent("dependent non-acyclic vertices have no canonical value",
                             vertices=s.vertices)


def stellar_instance(base, r, m):
    """Both sides of the stellar subdivision relation.

    Delta(m_1..m_k) = sum_{i<=r} Delta(m_1..m_{i-1}, m, m_{i+1}..m_k) when m
    lies in the span of m_1..m_r and (m_1..m_r, m) is acyclic.
    """
    base = [rays.ray(v) for v in base]
    m = rays.ray(m)
    k = len(base)
    if not 2 <= r <= k:
        raise InputError("r must satisfy 2 <= r <= k")
    if latlin.rank(latlin.from_columns(base)) != k:
        raise InputError("base rays must be independent")
    head = base[:r]
    if latlin.rank(latlin.from_columns(head + [m])) != r:
        raise NotInSpan("m is not in the span of the first r rays")
    if not latlin.is_acyclic(head + [m]):
        raise NotAcyclic("subdivision point and face rays are not acyclic")
    lhs = realize(SimplexGen.of(base))
    rhs = KElement.zero(len(m))
    for i in range(r):
        verts = base[:i] + [m] + base[i + 1:]
        rhs = rhs + realize(SimplexGen.of(verts))
    return lhs, rhs


def formal_boundary(s):
    """Alternating faces ((-1)^(i-1), face i) of an independent simplex."""
    s = _as_simplex(s)
    if s.k < 2:
        raise InputError("formal boundary needs k >= 2")
    if latlin.rank(latlin.from_columns(s.vertices)) != s.k:
        raise InputError("formal boundary needs independent vertices")
    out = []
    for i in range(s.k):
        face = s.vertices[:i] + s.vertices[i + 1:]
        e = realize(SimplexGen(face, s.n))
        (term,) = e.terms
        out.append(((-1) ** i, GerstenTerm(term, stratum_of(face))))
    return out


def boundary_of_chain(chain):
    """Formal boundary of a chain {vertex tuple: coeff}, cancelled.

    One-vertex faces map to the augmentation, keyed by the empty tuple.
    """
    acc = {}
    for verts, c in chain.items():
        k = len(verts)
        for i in range(k):
            face = verts[:i] + verts[i + 1:]
            acc[face] = acc.get(face, 0) + (-1) ** i * c
    return {f: c for f, c in acc.items() if c}


def orthant_fundamental(n):
    """Sum of the 2^n coordinate orthants, ordered to be positively oriented.

    Negatively oriented sign patterns get their first two vertices swapped;
    for n = 1 there is no transposition and the coefficient -1 is used.
    """
    if n < 1:
        raise InputError("n must be positive")
    total = KElement.zero(n)
    for signs in product((1, -1), repeat=n):
        verts = [tuple(sg * int(i == j) for j in range(n)) for i, sg in enumerate(signs)]
        neg = int(np.prod(signs)) < 0
        coeff = 1
        if neg:
            if n >= 2:
                verts[0], verts[1] = verts[1], verts[0]
            else:
                coeff = -1
        total = total + realize(SimplexGen.of(verts)).scaled(coeff)
    return total


def _biased_int(rng, bound):
    # small entries are more likely; magnitude geometric, capped at bound
    mag = min(int(rng.geometric(0.25)) - 1, bound)
    return int(mag if rng.random() < 0.5 else -mag)


def random_stellar_instance(n, rng, bound=10, max_fiber=400, uniform=False, tries=10000):
    """A random acyclic stellar configuration (base, r, m).

    Base rays have small-biased entries (uniform in [-bound, bound] when
    uniform is set), m is a primitive combination of the first r with nonzero
    coefficients, all entries stay within bound, and each simplex in the
    relation has |det| <= max_fiber (no cap when max_fiber is None).
    """
    if max_fiber is None:
        max_fiber = float("inf")
    for _ in range(tries):
        if uniform:
            base = [tuple(int(x) for x in rng.integers(-bound, bound + 1, size=n))
                    for _ in range(n)]
        else:
            base = [tuple(_biased_int(rng, bound) for _ in range(n)) for _ in range(n)]
        if any(not any(v) for v in base):
            continue
        d = latlin.det(latlin.from_columns(base))
        if d == 0 or abs(d) > max_fiber:
            continue
        base = [rays.ray(v) for v in base]
        r = int(rng.integers(2, n + 1))
        lam = [int(rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(r)]
        v = [sum(l * b[j] for l, b in zip(lam, base[:r])) for j in range(n)]
        if not any(v):
            continue
        m = rays.ray(v)
        if max(abs(x) for x in m) > bound or max(abs(x) for b in base for x in b) > bound:
            continue
        if not latlin.is_acyclic(base[:r] + [m]):
            continue
        ok = True
        for i in range(r):
            verts = base[:i] + [m] + base[i + 1:]
            if abs(latlin.det(latlin.from_columns(verts))) > max_fiber:
                ok = False
                break
        if ok:
            return base, r, m
    raise RuntimeError("no stellar instance found within the try budget")

"""Formal sums of twisted pushforward symbols.

A term ``coeff * M_*{1 - mu_1 w_1, ..., 1 - mu_k w_k}`` is stored with an
integer n x k matrix M (primitive columns) and twists t_i with
mu_i = exp(2 pi i t_i).  A KElement is a canonical sum of such terms plus a
multiple of the orientation symbol {-z_1, ..., -z_n}.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import latlin
from .errors import (DimensionMismatch, InputError, NonSquareTerm,
                     OrientationTranslate, RankDeficient, Singular)


@dataclass(frozen=True, order=True)
class SymbolTerm:
    matrix: tuple
    twists: tuple
    coeff: Fraction = Fraction(1)

    @property
    def n(self):
        return len(self.matrix)

    @property
    def k(self):
        return len(self.matrix[0])

    @property
    def key(self):
        return (self.k, self.matrix, self.twists)

    @property
    def square(self):
        return self.n == self.k

    def with_coeff(self, c):
        return SymbolTerm(self.matrix, self.twists, Fraction(c))


def generator(M, twists=None):
    """Normalized generator M_*{1 - mu_i w_i}, coefficient 1.

    A column with content c is divided by c and its twist multiplied by c,
    since [c]_*{1 - mu w} = {1 - mu^c w}.
    """
    M = latlin.as_matrix(M)
    k = len(M[0])
    if twists is None:
        twists = (0,) * k
    if len(twists) != k:
        raise DimensionMismatch("one twist per column required")
    if latlin.rank(M) != k:
        raise RankDeficient("generator matrix must have full column rank")
    cols, tw = [], []
    for col, t in zip(latlin.columns(M), twists):
        r, c = latlin.primitive(col)
        cols.append(r)
        tw.append(latlin.mod1(c * latlin.to_fraction(t)))
    return SymbolTerm(latlin.from_columns(cols), tuple(tw))


@dataclass(frozen=True)
class KElement:
    n: int
    terms: tuple = ()
    orient: Fraction = Fraction(0)

    @classmethod
    def build(cls, n, terms=(), orient=0):
        acc = {}
        for t in terms:
            if t.n != n:
                raise DimensionMismatch("term lives in a different ambient dimension")
            key = (t.k, t.matrix, t.twists)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(t.coeff)
        out = tuple(SymbolTerm(m, tw, c) for (_, m, tw), c in sorted(acc.items()) if c)
        return cls(n, out, Fraction(orient))

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def of(cls, term, coeff=1):
        return cls.build(term.n, [term.with_coeff(Fraction(coeff) * term.coeff)])

    def is_zero(self):
        return not self.terms and self.orient == 0

    def all_square(self):
        return all(t.square for t in self.terms)

    def _check(self, other):
        if not isinstance(other, KElement):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch("ambient dimensions differ")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return KElement.build(self.n, self.terms + other.terms, self.orient + other.orient)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scaled(self, c):
        c = Fraction(c)
        return KElement.build(self.n, [t.with_coeff(c * t.coeff) for t in self.terms],
                              c * self.orient)

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scaled(c)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        parts = [f"{t.coeff}*{list(map(list, t.matrix))}@{[str(x) for x in t.twists]}"
                 for t in self.terms]
        if self.orient:
            parts.append(f"{self.orient}*orient")
        return f"KElement(n={self.n}: " + (" + ".join(parts) or "0") + ")"

    def to_json(self):
        return {
            "terms": [{"coeff": str(t.coeff),
                       "matrix": [list(r) for r in t.matrix],
                       "twists": [str(x) for x in t.twists]} for t in self.terms],
            "orient": str(self.orient),
            "n": self.n,
        }

    @classmethod
    def from_json(cls, obj):
        try:
            n = obj["n"]
            terms = []
            for t in obj.get("terms", []):
                g = generator(t["matrix"], [latlin.to_fraction(x) for x in t["twists"]])
                terms.append(g.with_coeff(latlin.to_fraction(t["coeff"])))
            orient = latlin.to_fraction(obj.get("orient", "0"))
        except (KeyError, TypeError) as err:
            raise InputError(f"malformed KElement JSON: {err}") from err
        if not isinstance(n, int) or n < 1:
            raise InputError("n must be a positive integer")
        return cls.build(n, terms, orient)


def orientation_element(n, c=1):
    return KElement(n, (), Fraction(c))


def act(gamma, e):
    """Pushforward along a nonsingular rational matrix: M -> gamma·M.

    Columns are re-primitivized.  A non-integral column content is only
    allowed on an untwisted slot, where scaling is invisible.
    """
    g = latlin.as_matrix(gamma, rational=True)
    if len(g) != e.n or len(g[0]) != e.n:
        raise DimensionMismatch("gamma has the wrong size")
    d = latlin.det(g)
    if d == 0:
        raise Singular("act by a singular matrix")
    terms = []
    for t in e.terms:
        cols, tw = [], []
        for col, tau in zip(latlin.columns(latlin.matmul(g, t.matrix)), t.twists):
            den = lcm(*(x.denominator for x in col))
            r, c = latlin.primitive([int(x * den) for x in col])
            content = Fraction(c, den)
            if content.denominator != 1 and tau != 0:
                raise InputError("rational action on a twisted slot is not defined")
            cols.append(r)
            tw.append(latlin.mod1(content.numerator * tau) if tau else Fraction(0))
        terms.append(SymbolTerm(latlin.from_columns(cols), tuple(tw), t.coeff))
    s = 1 if d > 0 else -1
    return KElement.build(e.n, terms, s * e.orient)


def trace(a, e):
    """[a]_*: multiplies every twist by a."""
    if not isinstance(a, int) or a < 1:
        raise InputError("trace needs a positive integer")
    terms = [SymbolTerm(t.matrix, tuple(latlin.mod1(a * x) for x in t.twists), t.coeff)
             for t in e.terms]
    return KElement.build(e.n, terms, e.orient)


def trace_expanded(a, e):
    """[a]_* e as the raw pushforwards (a·M)_*, columns left unnormalized.

    Numerically equal to trace(a, e); used to check the normalization rule.
    """
    if not isinstance(a, int) or a < 1:
        raise InputError("trace needs a positive integer")
    terms = [SymbolTerm(tuple(tuple(a * x for x in r) for r in t.matrix), t.twists, t.coeff)
             for t in e.terms]
    return KElement.build(e.n, terms, e.orient)


def torsion_translate(a, e):
    """Pullback t_a^* along translation by the torsion point a.

    t_a^* M_* = M_* t_b^* for any b in the fiber of M over a; the smallest
    fiber point in canonical order is used.
    """
    a = tuple(latlin.mod1(latlin.to_fraction(x)) for x in a)
    if len(a) != e.n:
        raise DimensionMismatch("torsion point has the wrong length")
    if any(not t.square for t in e.terms):
        raise NonSquareTerm("translation needs square terms")
    if not any(a):
        return e
    if e.orient:
        raise OrientationTranslate("the orientation class is not translated")
    terms = []
    for t in e.terms:
        b = latlin.torsion_fiber(t.matrix, a)[0]
        tw = tuple(latlin.mod1(x + y) for x, y in zip(t.twists, b))
        terms.append(SymbolTerm(t.matrix, tw, t.coeff))
    return KElement.build(e.n, terms)

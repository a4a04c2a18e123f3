"""Kubota-Leopoldt distributions and specialization to cyclotomic symbols."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import gmpy2

from . import latlin
from .errors import BadHyperplane, DimensionMismatch, InputError, NonSquareTerm, OrientationPresent
from .ksym import KElement, torsion_translate, trace
from .regulator import SamplePlan, compare
from .regulator.core import fmt_real


def _point(a, n=None):
    if isinstance(a, str):
        a = [x for x in a.split(",") if x.strip()]
    pt = tuple(latlin.mod1(latlin.to_fraction(x)) for x in a)
    if n is not None and len(pt) != n:
        raise DimensionMismatch(f"torsion point of length {len(pt)}, expected {n}")
    return pt


@dataclass(frozen=True)
class LCDistribution:
    """a + Z^n  ->  t_a^* source, for a trace-fixed untwisted source."""
    source: KElement

    def __post_init__(self):
        s = self.source
        if s.orient:
            raise OrientationPresent("distribution source carries an orientation part")
        for t in s.terms:
            if not t.square:
                raise NonSquareTerm("distribution source needs square terms")
            if any(t.twists):
                raise InputError("distribution source needs untwisted terms")
        for a in (2, 3):
            if trace(a, s) != s:
                raise InputError(f"source is not fixed by [{a}]_*")

    @property
    def n(self):
        return self.source.n


def dist_value(d, a):
    return torsion_translate(_point(a, d.n), d.source)


def preimages(a, k):
    """The k^n points a' with k·a' = a mod Z^n."""
    a = _point(a)
    return [tuple(latlin.mod1((x + j) / k) for x, j in zip(a, js))
            for js in product(range(k), repeat=len(a))]


def relation_sides(d, a, k):
    """(t_a^* s, sum over k a' = a of t_{a'}^* s).

    The second side equals [k]^* of the first, so callers compare with the
    first side pulled back along z -> z^k.
    """
    if not isinstance(k, int) or k < 2:
        raise InputError("k must be an integer >= 2")
    a = _point(a, d.n)
    lhs = dist_value(d, a)
    rhs = KElement.zero(d.n)
    for b in preimages(a, k):
        rhs = rhs + dist_value(d, b)
    return lhs, rhs


def verify_distribution(d, a, k, plan=None):
    lhs, rhs = relation_sides(d, a, k)
    return compare(lhs, rhs, plan or SamplePlan(), mode="strict", power1=k)


@dataclass(frozen=True)
class CycloSymbol:
    """coeff · {1 - e(b_1), ..., 1 - e(b_n)} with no b_i = 0."""
    entries: tuple
    coeff: Fraction = Fraction(1)

    def __post_init__(self):
        if any(b == 0 for b in self.entries):
            raise BadHyperplane("cyclotomic symbol entry is 0 mod 1")

    def to_json(self):
        return {"b": [str(b) for b in self.entries], "coeff": str(self.coeff)}


def specialize(e, x):
    """Pullback of e to the torsion point x, one symbol per fiber point."""
    x = _point(x, e.n)
    if e.orient:
        raise OrientationPresent("the orientation class does not specialize to a symbol list")
    out = []
    for ti, t in enumerate(e.terms):
        if not t.square:
            raise NonSquareTerm("specialization needs square terms")
        for b in latlin.torsion_fiber(t.matrix, x):
            entries = tuple(latlin.mod1(tau + y) for tau, y in zip(t.twists, b))
            for slot, v in enumerate(entries):
                if v == 0:
                    raise BadHyperplane(f"term {ti} slot {slot} meets 1 - z = 0 at {x}",
                                        term=ti, slot=slot)
            out.append(CycloSymbol(entries, t.coeff))
    return out


def merged(symbols):
    """Collect equal entry lists, dropping zero totals."""
    acc = {}
    for s in symbols:
        acc[s.entries] = acc.get(s.entries, 0) + s.coeff
    return sorted((b, c) for b, c in acc.items() if c)


@dataclass
class NormCheck:
    b: Fraction
    k: int
    precision: int
    product: object
    target: object
    residual: object

    def passed(self, tol=1e-12):
        return self.residual < tol

    def to_json(self, digits=30):
        return {"b": str(self.b), "k": self.k, "precision_bits": self.precision,
                "product": [fmt_real(self.product.real, digits), fmt_real(self.product.imag, digits)],
                "target": [fmt_real(self.target.real, digits), fmt_real(self.target.imag, digits)],
                "residual": fmt_real(self.residual, 6)}


def cyclo_norm_check(b, k, precision=256):
    """prod over k b' = b of (1 - e(b')) against 1 - e(b)."""
    b = latlin.mod1(latlin.to_fraction(b))
    if not isinstance(k, int) or k < 2:
        raise InputError("k must be an integer >= 2")
    if b == 0:
        raise BadHyperplane("the fiber over 0 contains 0")
    with gmpy2.context(gmpy2.get_context(), precision=precision):
        two_pi_i = 2 * gmpy2.const_pi() * gmpy2.mpc(0, 1)

        def one_minus(q):
            return 1 - gmpy2.exp(two_pi_i * gmpy2.mpq(q.numerator, q.denominator))

        prod = gmpy2.mpc(1)
        for j in range(k):
            prod *= one_minus((b + j) / k)
        target = one_minus(b)
        res = abs(prod - target)
    return NormCheck(b, k, precision, prod, target, res)

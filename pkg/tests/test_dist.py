from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from gmcocycle import latlin
from gmcocycle.dist import (CycloSymbol, LCDistribution, cyclo_norm_check, dist_value, merged,
                            preimages, relation_sides, specialize, verify_distribution)
from gmcocycle.errors import BadHyperplane, InputError, NonSquareTerm, OrientationPresent
from gmcocycle.ksym import KElement, generator, orientation_element, torsion_translate
from gmcocycle.regulator import SamplePlan, compare

from strategies import nonsingular, torsion_points

F = Fraction
Z1 = KElement.of(generator(((1,),)))
D1 = LCDistribution(Z1)


def test_distribution_source_checks():
    with pytest.raises(OrientationPresent):
        LCDistribution(Z1 + orientation_element(1))
    with pytest.raises(InputError):
        LCDistribution(KElement.of(generator(((1,),), (F(1, 2),))))
    with pytest.raises(NonSquareTerm):
        LCDistribution(KElement.of(generator(((1,), (0,)))))
    s = KElement.of(generator(((1, 1), (0, 1)))) + KElement.of(generator(latlin.identity(2)))
    assert LCDistribution(s).n == 2


def test_dist_value_examples():
    assert dist_value(D1, "0") == Z1
    assert dist_value(D1, "1/3").terms[0].twists == (F(1, 3),)
    assert dist_value(D1, [F(4, 3)]) == dist_value(D1, "1/3")


def test_preimages():
    pts = preimages((F(1, 2),), 2)
    assert sorted(pts) == [(F(1, 4),), (F(3, 4),)]
    pts = preimages((0, F(1, 3)), 3)
    assert len(pts) == 9 == len(set(pts))
    assert all(latlin.mod1(3 * y - x) == 0 for p in pts for y, x in zip(p, (0, F(1, 3))))


def test_relation_examples():
    rep = verify_distribution(D1, "0", 2)
    assert rep.verdict == "Equal"
    d2 = LCDistribution(KElement.of(generator(latlin.identity(2))))
    assert verify_distribution(d2, "1/2,0", 2).verdict == "Equal"
    assert verify_distribution(d2, "1/3,2/3", 3).verdict == "Equal"
    with pytest.raises(InputError):
        relation_sides(D1, "0", 1)


def test_relation_without_pullback_fails():
    # the sum over preimages is [k]^* of t_a^* s, not t_a^* s itself
    lhs, rhs = relation_sides(D1, "1/3", 2)
    assert compare(lhs, rhs).verdict == "Distinct"


@settings(max_examples=15)
@given(st.integers(1, 2), st.integers(2, 3), st.data())
def test_relation_property(n, k, data):
    a = data.draw(torsion_points(n, 4))
    src = KElement.of(generator(latlin.identity(n)))
    if n == 2:
        src = src + KElement.of(generator(((1, 1), (0, 1)))) * F(1, 2)
    rep = verify_distribution(LCDistribution(src), a, k, SamplePlan(count=6, precision_bits=128))
    assert rep.verdict == "Equal"


def test_specialize_examples():
    syms = specialize(Z1, "1/3")
    assert [s.entries for s in syms] == [(F(1, 3),)]
    # [2]_*{1 - w} normalizes to {1 - z}: a single symbol at 1/2
    two = KElement.of(generator(((2,),)))
    assert [s.entries for s in specialize(two, "1/2")] == [(F(1, 2),)]
    # a determinant 2 term has two fiber points
    e = KElement.of(generator(((1, 1), (-1, 1))))
    syms = specialize(e, "1/2,0")
    assert sorted(s.entries for s in syms) == [(F(1, 4), F(1, 4)), (F(3, 4), F(3, 4))]
    with pytest.raises(BadHyperplane) as err:
        specialize(Z1, "0")
    assert err.value.slot == 0
    with pytest.raises(OrientationPresent):
        specialize(Z1 + orientation_element(1), "1/2")
    with pytest.raises(BadHyperplane):
        CycloSymbol((F(0),))


def test_merged():
    a = CycloSymbol((F(1, 2),), F(1))
    b = CycloSymbol((F(1, 2),), F(-1))
    c = CycloSymbol((F(1, 3),), F(2))
    assert merged([a, b, c]) == [((F(1, 3),), F(2))]


@settings(max_examples=40)
@given(nonsingular(2, bound=3, max_det=12), st.data())
def test_specialize_translate_consistency(M, data):
    a = data.draw(torsion_points(2, 3))
    x = data.draw(torsion_points(2, 5))
    e = KElement.of(generator(M, (F(1, 7), F(2, 7))))
    xa = tuple(latlin.mod1(u + v) for u, v in zip(x, a))
    try:
        lhs = merged(specialize(torsion_translate(a, e), x))
    except BadHyperplane:
        with pytest.raises(BadHyperplane):
            specialize(e, xa)
        return
    assert lhs == merged(specialize(e, xa))
    assert sum(c for _, c in lhs) == abs(latlin.det(e.terms[0].matrix))


def test_norm_examples():
    r = cyclo_norm_check("1/2", 2)
    assert r.passed() and r.residual < 1e-70
    assert abs(complex(r.target) - 2) < 1e-15
    assert cyclo_norm_check(F(1, 3), 3, precision=64).passed()
    with pytest.raises(BadHyperplane):
        cyclo_norm_check(0, 2)
    with pytest.raises(InputError):
        cyclo_norm_check("1/2", 1)
    assert cyclo_norm_check("2/3", 4).to_json()["k"] == 4


@given(st.integers(2, 30).flatmap(lambda q: st.tuples(st.integers(1, q - 1), st.just(q))), st.integers(2, 6))
def test_norm_property(bq, k):
    b, q = bq
    r = cyclo_norm_check(F(b, q), k)
    assert r.residual < 1e-70


def test_norm_oracle_polynomial():
    # 1 - z^k = prod_j (1 - zeta^j w) with w^k = z, checked at 128 bits
    with gmpy2.context(gmpy2.get_context(), precision=128):
        w = gmpy2.mpc("0.3+0.8j")
        for k in (2, 3, 5):
            zeta = gmpy2.exp(2 * gmpy2.const_pi() * gmpy2.mpc(0, 1) / k)
            prod = gmpy2.mpc(1)
            for j in range(k):
                prod *= 1 - zeta ** j * w
            assert abs(prod - (1 - w ** k)) < 1e-30

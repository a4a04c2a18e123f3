from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from gmcocycle import hecke, latlin
from gmcocycle.errors import DomainError, InputError, TooLarge

F = Fraction


def _span(vectors, n, p):
    pts = {(0,) * n}
    for v in vectors:
        pts = {tuple((a + c * b) % p for a, b in zip(x, v)) for x in pts for c in range(p)}
    return frozenset(pts)


def _all_subspaces(n, dim, p):
    # every subspace is spanned by dim of its vectors; dedupe by point set
    vecs = list(product(range(p), repeat=n))
    out = set()
    for basis in product(vecs, repeat=dim):
        sp = _span(basis, n, p)
        if len(sp) == p ** dim:
            out.add(sp)
    return out


def _oracle(n, i, p):
    """Multiplicities from annihilators of (n-i)-subspaces, counted on the grid."""
    acc = {}
    for W in _all_subspaces(n, n - i, p):
        for x in product(range(p), repeat=n):
            if all(sum(a * b for a, b in zip(w, x)) % p == 0 for w in W):
                pt = tuple(F(v, p) for v in x)
                acc[pt] = acc.get(pt, 0) + 1
    return acc


def test_qbinom_examples():
    assert hecke.qbinom(2, 1, 2) == 3
    assert hecke.qbinom(3, 1, 2) == 7
    assert hecke.qbinom(4, 2, 2) == 35
    assert hecke.qbinom(3, 0, 5) == 1
    with pytest.raises(DomainError):
        hecke.qbinom(2, 3, 2)


@given(st.integers(0, 6).flatmap(lambda a: st.tuples(st.just(a), st.integers(0, a))),
       st.sampled_from([2, 3, 5, 7]))
def test_qbinom_symmetry_and_pascal(ab, p):
    a, b = ab
    assert hecke.qbinom(a, b, p) == hecke.qbinom(a, a - b, p)
    if 0 < b < a:
        assert hecke.qbinom(a, b, p) == hecke.qbinom(a - 1, b - 1, p) + p ** b * hecke.qbinom(a - 1, b, p)


@pytest.mark.parametrize("n,dim,p", [(2, 1, 2), (3, 1, 2), (3, 2, 3), (4, 2, 2), (2, 1, 5)])
def test_subspace_count_against_enumeration(n, dim, p):
    assert hecke.subspace_count(n, dim, p) == hecke.qbinom(n, dim, p) == len(_all_subspaces(n, dim, p))


@pytest.mark.parametrize("v", [(1, 0, 0), (1, 1, 0), (0, 1, 2), (2, 2, 2)])
def test_subspaces_through_vector(v):
    n, p = 3, 3
    for dim in (1, 2):
        want = sum(1 for W in _all_subspaces(n, dim, p) if tuple(x % p for x in v) in W)
        assert hecke.subspace_count(n, dim, p, through=v) == want == hecke.qbinom(n - 1, dim - 1, p)
    with pytest.raises(InputError):
        hecke.subspace_count(3, 1, 3, through=(3, 0, 0))


def test_coset_reps_count_and_kernels():
    for n, i, p in [(2, 1, 2), (3, 1, 2), (3, 2, 3)]:
        reps = hecke.coset_reps(n, i, p)
        assert len(reps) == hecke.qbinom(n, i, p) == len(set(reps))
        for a in reps:
            assert latlin.snf(a).diagonal == (1,) * (n - i) + (p,) * i
            assert len(latlin.torsion_fiber(a, (0,) * n)) == p ** i


def test_reps_are_distinct_cosets():
    # Gamma a = Gamma b iff a b^-1 is unimodular
    reps = hecke.coset_reps(3, 1, 2)
    for a, b in product(reps, repeat=2):
        q = latlin.matmul(latlin.as_matrix(a, rational=True), latlin.inverse(b))
        integral = all(x.denominator == 1 for r in q for x in r)
        assert (integral and abs(latlin.det(q)) == 1) == (a == b)


@pytest.mark.parametrize("n,i,p", [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 2, 2), (3, 1, 3), (4, 2, 2)])
def test_hecke_against_oracle(n, i, p):
    rep = hecke.verify_hecke(n, i, p)
    assert rep.passed
    assert rep.computed.as_dict() == _oracle(n, i, p)


def test_hecke_example_two():
    rep = hecke.verify_hecke(2, 1, 2)
    d = rep.computed.as_dict()
    assert d[(F(0), F(0))] == 3
    assert all(d[x] == 1 for x in [(F(1, 2), F(0)), (F(0), F(1, 2)), (F(1, 2), F(1, 2))])
    s = rep.to_json()
    assert s["computed"]["identity"] == 3 and s["computed"]["others"] == [1]


def test_full_rank_index():
    rep = hecke.verify_hecke(3, 3, 2)
    assert rep.passed and rep.reps == 1
    assert set(rep.computed.as_dict().values()) == {1}


def test_adjoint_kernels_depend_on_representative():
    # the p alpha^-1 kernels are not uniform on the nonzero points
    d = hecke.adjoint_kernels(2, 1, 2).as_dict()
    others = sorted(c for x, c in d.items() if any(x))
    assert len(set(others)) > 1


def test_budget_and_domain():
    with pytest.raises(TooLarge):
        hecke.coset_reps(6, 3, 7, budget=1000)
    with pytest.raises(DomainError):
        hecke.coset_reps(2, 1, 4)
    with pytest.raises(DomainError):
        hecke.coset_reps(2, 0, 2)

"""Hecke operators T_p^(i) on the identity torsion class."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import latlin
from .errors import DomainError, InputError, NonIntegral, TooLarge

BUDGET = 10 ** 6


def qbinom(a, b, p):
    """Gaussian binomial [a choose b]_p."""
    if not (0 <= b <= a) or p < 2:
        raise DomainError("qbinom needs 0 <= b <= a and p >= 2")
    num = den = 1
    for k in range(1, a + 1):
        num *= p ** k - 1
    for k in range(1, b + 1):
        den *= p ** k - 1
    for k in range(1, a - b + 1):
        den *= p ** k - 1
    return num // den


def _is_prime(p):
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def _rref_candidates(n, dim, p):
    return sum(p ** _free_count(n, piv) for piv in combinations(range(n), dim))


def _free_count(n, pivots):
    pivset = set(pivots)
    return sum(1 for r, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivset)


def rref_subspaces(n, dim, p, budget=BUDGET):
    """Yield every dim-dimensional subspace of F_p^n as its RREF basis."""
    if not 0 <= dim <= n:
        raise DomainError("need 0 <= dim <= n")
    if not _is_prime(p):
        raise DomainError("p must be prime")
    if _rref_candidates(n, dim, p) > budget:
        raise TooLarge("subspace enumeration exceeds the budget")
    for piv in combinations(range(n), dim):
        pivset = set(piv)
        slots = [(r, j) for r, c in enumerate(piv) for j in range(c + 1, n) if j not in pivset]
        for vals in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(dim)]
            for r, c in enumerate(piv):
                rows[r][c] = 1
            for (r, j), v in zip(slots, vals):
                rows[r][j] = v
            yield tuple(tuple(r) for r in rows)


def _rank_mod_p(rows, p):
    M = [[x % p for x in r] for r in rows]
    if not M:
        return 0
    rank = 0
    cols = len(M[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def subspace_count(n, dim, p, through=None, budget=BUDGET):
    """Brute-force count of dim-subspaces of F_p^n, optionally through a vector."""
    if through is not None:
        through = [int(x) % p for x in through]
        if len(through) != n or not any(through):
            raise InputError("through must be a nonzero vector of length n")
    count = 0
    for basis in rref_subspaces(n, dim, p, budget):
        if through is None or _rank_mod_p(list(basis) + [through], p) == dim:
            count += 1
    return count


def coset_reps(n, i, p, budget=BUDGET):
    """Row-HNF representatives alpha of Gamma diag(p,..,p,1,..,1) Gamma / Gamma-left.

    The coset Gamma·alpha is determined by the row lattice of alpha, which
    runs over the lattices p Z^n <= L <= Z^n with Z^n / L = (Z/p)^i.
    """
    if not 1 <= i <= n:
        raise DomainError("need 1 <= i <= n")
    reps = []
    pI = [tuple(p * int(r == c) for c in range(n)) for r in range(n)]
    for W in rref_subspaces(n, n - i, p, budget):
        alpha = latlin.hnf_rows(list(W) + pI, n)
        _check_rep(alpha, i, p)
        reps.append(alpha)
    return reps


def _check_rep(alpha, i, p):
    n = len(alpha)
    diag = latlin.snf(alpha).diagonal
    want = (1,) * (n - i) + (p,) * i
    if diag != want:
        raise NonIntegral(f"representative has elementary divisors {diag}, expected {want}")
    inv = latlin.inverse(alpha)
    if any((p * x).denominator != 1 for r in inv for x in r):
        raise NonIntegral("p * alpha^-1 is not integral")


@dataclass(frozen=True)
class TorsionMultiset:
    n: int
    p: int
    counts: tuple  # sorted ((point, multiplicity), ...)

    def as_dict(self):
        return dict(self.counts)

    def total(self):
        return sum(c for _, c in self.counts)

    def to_json(self):
        return {"n": self.n, "p": self.p,
                "points": [{"x": [str(v) for v in x], "mult": c} for x, c in self.counts]}


def hecke_on_identity(n, i, p, budget=BUDGET):
    """Sum over representatives of the torsion kernel of the monomial map alpha.

    The kernel {x : alpha x = 0 mod Z^n} depends only on the coset
    Gamma·alpha and has p^i points.
    """
    acc = {}
    for alpha in coset_reps(n, i, p, budget):
        ker = latlin.torsion_fiber(alpha, (0,) * n)
        if len(ker) != p ** i or len(set(ker)) != len(ker):
            raise NonIntegral("kernel has the wrong size")
        for x in ker:
            acc[x] = acc.get(x, 0) + 1
    return TorsionMultiset(n, p, tuple(sorted(acc.items())))


def predicted(n, i, p):
    """Identity with multiplicity [n, i]_p, other p-torsion points [n-1, i-1]_p."""
    a = qbinom(n, i, p)
    b = qbinom(n - 1, i - 1, p)
    acc = {}
    for x in product(range(p), repeat=n):
        pt = tuple(Fraction(v, p) for v in x)
        acc[pt] = a if not any(x) else b
    return TorsionMultiset(n, p, tuple(sorted((k, v) for k, v in acc.items() if v)))


@dataclass
class HeckeReport:
    n: int
    i: int
    p: int
    passed: bool
    computed: TorsionMultiset
    expected: TorsionMultiset
    reps: int

    def to_json(self):
        return {"n": self.n, "i": self.i, "p": self.p, "passed": self.passed, "reps": self.reps,
                "computed": _summary(self.computed), "expected": _summary(self.expected)}


def _summary(ms):
    d = ms.as_dict()
    ident = tuple(Fraction(0) for _ in range(ms.n))
    others = sorted({c for x, c in d.items() if x != ident})
    return {"identity": d.get(ident, 0), "others": others, "support": len(d),
            "points": ms.to_json()["points"]}


def verify_hecke(n, i, p, budget=BUDGET):
    comp = hecke_on_identity(n, i, p, budget)
    exp = predicted(n, i, p)
    return HeckeReport(n, i, p, comp.counts == exp.counts, comp, exp, qbinom(n, i, p))


def adjoint_kernels(n, i, p, budget=BUDGET):
    """Multiset of kernels of p·alpha^-1 over the representatives.

    Diagnostic only: unlike the kernel of alpha this depends on the chosen
    representative of the coset, so it is not a well-defined Hecke image.
    """
    acc = {}
    for alpha in coset_reps(n, i, p, budget):
        inv = latlin.inverse(alpha)
        B = tuple(tuple(int(p * x) for x in r) for r in inv)
        for x in latlin.torsion_fiber(B, (0,) * n):
            acc[x] = acc.get(x, 0) + 1
    return TorsionMultiset(n, p, tuple(sorted(acc.items())))

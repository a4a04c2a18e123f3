"""Proper intersection of the stellar-relation cycle with cubical faces.

For an n x (n+1) matrix M the cycle is the closure of
(p_1, ..., p_n, 1 - z_1, ..., 1 - z_{n+1}) with p_j the monomial in z whose
exponents are row j of M.  Faces fix some 1 - z_i to 0 (z_i = 1) or to
infinity (z_i = infinity).
"""
from dataclasses import dataclass, field
from itertools import product

import gmpy2

from . import latlin
from .errors import InputError, MinorZero
from .regulator.core import fmt_real

PROPER_BY_REDUCTION = "PROPER_BY_REDUCTION"
EMPTY = "EMPTY"
CERTIFIED = "Certified"
UNCERTIFIED = "Uncertified"


def _shape(M):
    M = latlin.as_matrix(M)
    n = len(M)
    if n == 0 or any(len(r) != n + 1 for r in M):
        raise InputError("expected an n x (n+1) integer matrix")
    return M, n


def maximal_minors(M):
    """minor_i = det of M without column i."""
    M, n = _shape(M)
    cols = latlin.columns(M)
    return [latlin.det(latlin.from_columns(cols[:i] + cols[i + 1:])) for i in range(n + 1)]


def minors_full(M):
    return all(maximal_minors(M))


def kernel_vector(M):
    """Generator (-1)^i minor_i of the kernel of a full-rank M."""
    return [(-1) ** i * m for i, m in enumerate(maximal_minors(M))]


@dataclass(frozen=True)
class FaceLabel:
    subset: tuple   # 1-based indices in {1, ..., n+1}
    labels: tuple   # "0" or "inf", one per index

    def __post_init__(self):
        if not self.subset:
            raise InputError("a face label needs a nonempty subset")

    def to_json(self):
        return {"I": list(self.subset), "labels": list(self.labels)}


def face_labels(n):
    """All 3^(n+1) - 1 labelled nonempty subsets."""
    out = []
    for choice in product((None, "0", "inf"), repeat=n + 1):
        idx = tuple(i + 1 for i, c in enumerate(choice) if c)
        if idx:
            out.append(FaceLabel(idx, tuple(c for c in choice if c)))
    return out


@dataclass
class FaceReport:
    face: FaceLabel
    status: str
    reason: str

    def to_json(self):
        return {**self.face.to_json(), "status": self.status, "reason": self.reason}


@dataclass
class CertifyReport:
    status: str
    n: int
    matrix: tuple
    witness: object = None          # hemisphere functional when acyclic
    gordan: object = None           # nonnegative kernel vector when not
    reduced: object = None          # (x, y) after the adjugate reduction
    pivot: object = None            # 1-based i with sgn x_i = sgn y_i
    faces: list = field(default_factory=list)
    conjecture: str = ""

    @property
    def certified(self):
        return self.status == CERTIFIED

    def to_json(self):
        out = {"status": self.status, "n": self.n, "matrix": [list(r) for r in self.matrix]}
        if self.witness is not None:
            out["witness"] = [str(v) for v in self.witness]
        if self.gordan is not None:
            out["gordan"] = list(self.gordan)
        if self.reduced is not None:
            out["x"], out["y"] = list(self.reduced[0]), list(self.reduced[1])
            out["pivot"] = self.pivot
        out["faces"] = [f.to_json() for f in self.faces]
        if self.conjecture:
            out["conjecture"] = self.conjecture
        return out


def _sgn(v):
    return (v > 0) - (v < 0)


def _infinity_face(face, x, y, pivot, n):
    """Emptiness of an all-infinity face, following the two-case contradiction.

    A point on the face has z_j = infinity for j in I, no z_i = 0, and every
    p_i = z_i^x_i z_{n+1}^y_i finite and nonzero.
    """
    last = n + 1
    I = set(face.subset)
    if last not in I:
        same = [j for j in sorted(I) if _sgn(x[j - 1]) == _sgn(y[j - 1])]
        if same:
            j = same[0]
            return (f"p_{j} finite with z_{j} = inf and sgn x_{j} = sgn y_{j} forces "
                    f"z_{last} = 0")
        head = (f"every j in I has sgn x_j != sgn y_j, so z_{last} = inf; ")
    else:
        head = f"z_{last} = inf; "
    return head + f"then p_{pivot} finite with sgn x_{pivot} = sgn y_{pivot} forces z_{pivot} = 0"


def _valuation_free(lam, face):
    # a point on the face gives valuations v <= 0 with v < 0 on I and M v = 0;
    # the kernel is the line through lam, so check neither direction fits
    for s in (1, -1):
        v = [s * x for x in lam]
        if all(x <= 0 for x in v) and all(v[i - 1] < 0 for i in face.subset):
            return False
    return True


def certify_infinity_faces(M):
    """Certified when M is acyclic, with a status for every labelled face."""
    M, n = _shape(M)
    if not minors_full(M):
        raise MinorZero("some maximal minor of M vanishes")
    cols = latlin.columns(M)
    lam = kernel_vector(M)
    witness = latlin.hemisphere_witness(cols)
    mixed = any(v > 0 for v in lam) and any(v < 0 for v in lam)
    if (witness is not None) != mixed:
        raise AssertionError("hemisphere witness disagrees with the kernel sign test")
    if witness is None:
        g = lam if lam[0] > 0 else [-v for v in lam]
        return CertifyReport(UNCERTIFIED, n, M, gordan=tuple(g),
                             conjecture="non-acyclic is expected but not proved to be improper")
    A = latlin.from_columns(cols[:n])
    R = latlin.matmul(latlin.adjugate(A), M)
    d = latlin.det(A)
    for i in range(n):
        for j in range(n):
            if R[i][j] != (d if i == j else 0):
                raise AssertionError("adjugate reduction failed")
    x = tuple(R[i][i] for i in range(n))
    y = tuple(R[i][n] for i in range(n))
    if not all(x) or not all(y):
        raise AssertionError("reduced matrix has a zero entry")
    same = [i + 1 for i in range(n) if _sgn(x[i]) == _sgn(y[i])]
    if not same:
        raise AssertionError("acyclic input without a sign agreement")
    pivot = same[0]
    faces = []
    for face in face_labels(n):
        if "0" in face.labels:
            i = face.subset[face.labels.index("0")]
            faces.append(FaceReport(face, PROPER_BY_REDUCTION,
                                    f"z_{i} = 1 reduces to a finite pushforward"))
            continue
        reason = _infinity_face(face, x, y, pivot, n)
        if not _valuation_free(lam, face):
            raise AssertionError("functional cross-check failed")
        faces.append(FaceReport(face, EMPTY, reason))
    return CertifyReport(CERTIFIED, n, M, witness=tuple(witness), reduced=(x, y),
                         pivot=pivot, faces=faces)


@dataclass
class CurvePoint:
    t: float
    inv_gap: tuple     # |1 - z_i|^-1
    p: tuple           # the monomials p_j along the curve

    def to_json(self):
        return {"t": self.t, "inv_abs_one_minus_z": [fmt_real(v, 6) for v in self.inv_gap],
                "p": [[fmt_real(v.real, 12), fmt_real(v.imag, 12)] for v in self.p]}


def curve_diagnostic(M, g=None, ts=(1e3, 1e6), precision=128):
    """Follow z_i = g_i t^lambda_i for the nonnegative kernel vector lambda.

    Along the curve every p_j stays equal to its value at t = 1 while all
    z_i run to infinity, so the all-infinity face meets the closure in a
    positive-dimensional family.
    """
    rep = certify_infinity_faces(M)
    if rep.certified:
        raise InputError("the curve diagnostic applies to non-acyclic configurations")
    M, n = rep.matrix, rep.n
    lam = rep.gordan
    g = tuple(g) if g is not None else tuple(range(2, n + 3))
    if len(g) != n + 1:
        raise InputError("g needs n + 1 entries")
    out = []
    with gmpy2.context(gmpy2.get_context(), precision=precision):
        gs = [gmpy2.mpc(complex(v)) for v in g]
        for t in ts:
            z = [gi * gmpy2.mpfr(t) ** l for gi, l in zip(gs, lam)]
            inv = tuple(1 / abs(1 - zi) for zi in z)
            p = []
            for row in M:
                acc = gmpy2.mpc(1)
                for zi, e in zip(z, row):
                    acc *= zi ** e
                p.append(acc)
            out.append(CurvePoint(t, inv, tuple(p)))
    return out


def curve_approaches_face(points, tol=1e-20):
    """|1 - z_i| grows along the curve while p stays fixed."""
    if len(points) < 2:
        return False
    grows = all(b < a for pa, pb in zip(points, points[1:])
                for a, b in zip(pa.inv_gap, pb.inv_gap))
    fixed = all(abs(p - q) <= tol * max(1, abs(q))
                for pa in points[1:] for p, q in zip(pa.p, points[0].p))
    return grows and fixed

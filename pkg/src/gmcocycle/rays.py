"""Classification of ray tuples: rank, acyclicity and orientation."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from . import latlin
from .errors import DimensionMismatch, InputError, NotFullRank


class TupleKind(Enum):
    INDEPENDENT_POSITIVE = "IndependentPositive"
    INDEPENDENT_NEGATIVE = "IndependentNegative"
    INDEPENDENT = "Independent"  # non-square, no orientation
    DEPENDENT_ACYCLIC = "DependentAcyclic"
    DEPENDENT_NON_ACYCLIC = "DependentNonAcyclic"


@dataclass(frozen=True)
class TupleClass:
    kind: TupleKind
    rank: int
    sign: Optional[int] = None
    witness: Optional[tuple] = None

    @property
    def independent(self):
        return self.kind in (TupleKind.INDEPENDENT_POSITIVE,
                             TupleKind.INDEPENDENT_NEGATIVE,
                             TupleKind.INDEPENDENT)

    @property
    def acyclic(self):
        return self.kind is not TupleKind.DEPENDENT_NON_ACYCLIC


def ray(v):
    """Primitive integer direction of a nonzero integer vector."""
    return latlin.primitive(v)[0]


def _prepare(rays):
    rays = [ray(m) for m in rays]
    if not rays:
        raise InputError("empty ray tuple")
    n = len(rays[0])
    if any(len(m) != n for m in rays):
        raise DimensionMismatch("rays of different ambient dimension")
    return rays, n


def classify(rays):
    rays, n = _prepare(rays)
    k = len(rays)
    mat = latlin.from_columns(rays)
    r = latlin.rank(mat)
    if r == k:
        if k == n:
            s = 1 if latlin.det(mat) > 0 else -1
            kind = TupleKind.INDEPENDENT_POSITIVE if s > 0 else TupleKind.INDEPENDENT_NEGATIVE
            return TupleClass(kind, r, s)
        return TupleClass(TupleKind.INDEPENDENT, r)
    w = latlin.hemisphere_witness(rays)
    if w is not None:
        return TupleClass(TupleKind.DEPENDENT_ACYCLIC, r, witness=w)
    return TupleClass(TupleKind.DEPENDENT_NON_ACYCLIC, r)


def orientation(rays):
    rays, n = _prepare(rays)
    if len(rays) != n:
        raise NotFullRank("orientation needs n rays in dimension n")
    d = latlin.det(latlin.from_columns(rays))
    if d == 0:
        raise NotFullRank("rays are linearly dependent")
    return 1 if d > 0 else -1


def to_json(rays):
    return [list(m) for m in rays]


def from_json(obj):
    if not isinstance(obj, list) or not obj:
        raise InputError("ray tuple must be a nonempty list of integer vectors")
    return [tuple(latlin.as_matrix([m])[0]) for m in obj]

"""Batch verification of every identity the engine checks.

Each check draws from its own random stream, derived from the run seed and a
hash of the check name, so adding a check never perturbs the others.  The
report holds no timings and is byte-identical for a fixed seed.
"""
import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import chains, cocycle, dist, hecke, intersect, latlin
from .errors import (BadHyperplane, ExtensionDependent, InputError, NearSingular,
                     NonConstantDefect, NonIntegerDefect)
from .ksym import KElement, generator, orientation_element, trace, trace_expanded
from .regulator import SamplePlan, compare
from .regulator.core import fmt_real

PRECISION_ENV = "GMCOCYCLE_PRECISION"


def default_precision():
    raw = os.environ.get(PRECISION_ENV, "").strip()
    if not raw:
        return 256
    try:
        return int(raw)
    except ValueError as err:
        raise InputError(f"{PRECISION_ENV} must be an integer") from err


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 24
    tolerance: float = 1e-9
    precision_bits: int = field(default_factory=default_precision)
    budget: int = hecke.BUDGET
    output: str = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if self.precision_bits < 64:
            raise InputError("precision_bits must be at least 64")
        if self.samples < 1:
            raise InputError("samples must be positive")
        if self.budget < 1:
            raise InputError("budget must be positive")

    def plan(self, seed=None):
        return SamplePlan(seed=self.seed if seed is None else seed, count=self.samples,
                          precision_bits=self.precision_bits, tolerance=self.tolerance)

    def to_json(self):
        return {"seed": self.seed, "samples": self.samples, "tolerance": repr(self.tolerance),
                "precision_bits": self.precision_bits, "budget": self.budget}


def stream(seed, name):
    h = int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "little")
    return np.random.default_rng([seed, h])


def _subseed(rng):
    return int(rng.integers(2 ** 32))


def _mat(M):
    return [list(r) for r in M]


class _Tally:
    def __init__(self):
        self.worst = 0.0
        self.count = 0
        self.failures = []

    def report(self, rep, instance):
        self.count += 1
        self.worst = max(self.worst, float(rep.max_residual))
        if rep.verdict != "Equal":
            self.failures.append({"instance": instance, "report": rep.to_json()})

    def summary(self):
        return {"instances": self.count, "max_residual": fmt_real(self.worst, 3)}


# individual checks -------------------------------------------------------

def check_stellar(cfg, rng, per_n=50, dims=(2, 3, 4)):
    tally = _Tally()
    by_n = {}
    for n in dims:
        sub = _Tally()
        for _ in range(per_n):
            base, r, m = chains.random_stellar_instance(n, rng)
            lhs, rhs = chains.stellar_instance(base, r, m)
            rep = compare(lhs, rhs, cfg.plan(_subseed(rng)))
            inst = {"base": [list(b) for b in base], "r": r, "m": list(m)}
            sub.report(rep, inst)
            tally.report(rep, inst)
        by_n[str(n)] = sub.summary()
    return not tally.failures, {**tally.summary(), "by_n": by_n}, tally.failures


def check_orthants(cfg, rng, dims=(1, 2, 3)):
    tally = _Tally()
    for n in dims:
        rep = compare(chains.orthant_fundamental(n), orientation_element(n, 1),
                      cfg.plan(_subseed(rng)))
        tally.report(rep, {"n": n})
    return not tally.failures, tally.summary(), tally.failures


HECKE_MATRIX = ((2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1), (4, 2, 2))


def check_hecke(cfg, rng, triples=HECKE_MATRIX):
    failures, rows = [], []
    for n, p, i in triples:
        rep = hecke.verify_hecke(n, i, p, cfg.budget)
        q = hecke.qbinom(n, i, p)
        counts = {"reps": len(hecke.coset_reps(n, i, p, cfg.budget)),
                  "subspaces_codim_i": hecke.subspace_count(n, n - i, p, budget=cfg.budget),
                  "subspaces_dim_i": hecke.subspace_count(n, i, p, budget=cfg.budget)}
        ok = rep.passed and all(v == q for v in counts.values())
        rows.append({"n": n, "p": p, "i": i, "qbinom": q, "passed": ok, **counts})
        if not ok:
            failures.append({"instance": {"n": n, "p": p, "i": i}, "report": rep.to_json()})
    return not failures, {"triples": rows}, failures


def _random_matrix(rng, n, bound, max_det=None):
    while True:
        M = [[int(x) for x in rng.integers(-bound, bound + 1, size=n)] for _ in range(n)]
        d = latlin.det(M)
        if d and (max_det is None or abs(d) <= max_det):
            return M


def _random_untwisted(rng, n, terms=2, bound=3, max_det=12):
    e = KElement.zero(n)
    for _ in range(terms):
        c = Fraction(int(rng.integers(-3, 4)) or 1, int(rng.integers(1, 3)))
        e = e + KElement.of(generator(_random_matrix(rng, n, bound, max_det)), c)
    return e


def check_trace(cfg, rng, syntactic=10):
    failures = []
    for n in (1, 2, 3):
        for _ in range(syntactic):
            e = _random_untwisted(rng, n)
            for a in (2, 3, 5):
                if trace(a, e) != e:
                    failures.append({"instance": {"n": n, "a": a, "element": e.to_json()},
                                     "reason": "trace moved an untwisted element"})
    tally = _Tally()
    for n in (1, 2, 3):
        e = _random_untwisted(rng, n)
        for a in (2, 3):
            rep = compare(trace_expanded(a, e), e, cfg.plan(_subseed(rng)))
            tally.report(rep, {"n": n, "a": a, "element": e.to_json()})
    failures += tally.failures
    return not failures, {"syntactic": 3 * syntactic * 3, **tally.summary()}, failures


def _gp_triple(rng, n=3):
    while True:
        t = [cocycle.random_unimodular(n, rng) for _ in range(n)]
        if cocycle.general_position(t):
            return t


def check_sym_cocycle(cfg, rng, count=25):
    tally = _Tally()
    for _ in range(count):
        t = _gp_triple(rng)
        c = cocycle.coboundary(lambda s: cocycle.theta(s, "sym"), t)
        rep = compare(c, KElement.zero(3), cfg.plan(_subseed(rng)))
        tally.report(rep, {"gammas": [_mat(g) for g in t]})
    return not tally.failures, tally.summary(), tally.failures


def _key(t):
    return tuple(tuple(tuple(r) for r in g) for g in t)


def _evaluable(t):
    return all(cocycle.theta_defined(s) for s in cocycle.merged_subtuples(t))


def check_euler(cfg, rng, count=25, triples=10):
    cache = {}
    failures = []
    spread = 0.0

    def defect(t):
        k = _key(t)
        if k not in cache:
            val, rep = cocycle.euler_defect(t, cfg.plan(_subseed(rng)))
            cache[k] = (val, rep)
        return cache[k][0]

    seen = 0
    values = []
    while seen < count:
        t = [cocycle.random_unimodular(2, rng) for _ in range(2)]
        if not _evaluable(t):
            continue
        seen += 1
        try:
            values.append(defect(t))
            spread = max(spread, float(cache[_key(t)][1].max_residual))
        except (ExtensionDependent, NonConstantDefect, NonIntegerDefect, NearSingular) as err:
            failures.append({"instance": {"gammas": [_mat(g) for g in t]},
                             "reason": f"{type(err).__name__}: {err}"})
    cob = 0
    while cob < triples:
        t = [cocycle.random_unimodular(2, rng) for _ in range(3)]
        if not all(_evaluable(s) for s in cocycle.merged_subtuples(t)):
            continue
        cob += 1
        v = cocycle.defect_coboundary(defect, t)
        if v != 0:
            failures.append({"instance": {"gammas": [_mat(g) for g in t]},
                             "reason": f"integer coboundary {v}"})
    hist = {}
    for v in values:
        hist[str(v)] = hist.get(str(v), 0) + 1
    return not failures, {"tuples": seen, "spread": fmt_real(spread, 3),
                          "defects": dict(sorted(hist.items())), "coboundary_triples": cob}, failures


def _random_point(rng, n, max_den=6):
    return tuple(latlin.mod1(Fraction(int(rng.integers(0, q)), q))
                 for q in (int(x) for x in rng.integers(1, max_den + 1, size=n)))


def check_distribution(cfg, rng, per_case=2):
    tally = _Tally()
    for n in (1, 2, 3):
        for k in (2, 3, 4):
            for j in range(per_case):
                if j == 0:
                    src = KElement.of(generator(latlin.identity(n)))
                else:
                    src = _random_untwisted(rng, n, terms=1, bound=2, max_det=4 if n == 3 else 6)
                a = _random_point(rng, n)
                rep = dist.verify_distribution(dist.LCDistribution(src), a, k,
                                               cfg.plan(_subseed(rng)))
                tally.report(rep, {"n": n, "k": k, "a": [str(x) for x in a],
                                   "source": src.to_json()})
    return not tally.failures, tally.summary(), tally.failures


def check_cyclotomic(cfg, rng, fibers=20):
    failures = []
    worst = 0.0
    checked = 0
    for q in range(2, 13):
        for j in range(1, q):
            if gcd(j, q) != 1:
                continue
            for k in (2, 3, 4):
                rep = dist.cyclo_norm_check(Fraction(j, q), k, cfg.precision_bits)
                checked += 1
                worst = max(worst, float(rep.residual))
                if not rep.passed(1e-12):
                    failures.append({"instance": {"b": f"{j}/{q}", "k": k}, "report": rep.to_json()})
    counted = 0
    while counted < fibers:
        n = int(rng.integers(1, 4))
        e = _random_untwisted(rng, n, terms=1, bound=3, max_det=30)
        x = _random_point(rng, n, max_den=7)
        try:
            syms = dist.specialize(e, x)
        except BadHyperplane:
            continue
        counted += 1
        want = abs(latlin.det(e.terms[0].matrix))
        if len(syms) != want:
            failures.append({"instance": {"element": e.to_json(), "x": [str(v) for v in x]},
                             "reason": f"{len(syms)} symbols, expected {want}"})
    return not failures, {"norm_checks": checked, "max_residual": fmt_real(worst, 3),
                          "fiber_counts": counted}, failures


def check_intersect(cfg, rng, count=50):
    failures = []
    done = 0
    faces = 0
    while done < count:
        n = int(rng.integers(1, 5))
        M = [[int(x) for x in rng.integers(-10, 11, size=n + 1)] for _ in range(n)]
        if not intersect.minors_full(M) or not latlin.is_acyclic(latlin.columns(M)):
            continue
        done += 1
        rep = intersect.certify_infinity_faces(M)
        faces += len(rep.faces)
        if not rep.certified or len(rep.faces) != 3 ** (n + 1) - 1:
            failures.append({"instance": {"matrix": M}, "report": rep.to_json()})
    nonac = intersect.certify_infinity_faces([[1, -1]])
    pts = intersect.curve_diagnostic([[1, -1]])
    approach = intersect.curve_approaches_face(pts)
    if nonac.certified or not approach:
        failures.append({"instance": {"matrix": [[1, -1]]}, "report": nonac.to_json(),
                         "curve": [p.to_json() for p in pts]})
    return not failures, {"certified": done, "faces": faces, "non_acyclic": nonac.status,
                          "curve_approaches_face": approach,
                          "curve": [p.to_json() for p in pts]}, failures


def check_sullivan(cfg, rng):
    a = cocycle.sullivan_d(2, (), 50)
    b = cocycle.sullivan_d(1, (), 50)
    ok = a.value == 12 and a.stabilized and b.value == 2
    detail = {"n2": {"value": a.value, "stabilized": a.stabilized},
              "n1": {"value": b.value, "stabilized": b.stabilized}}
    return ok, detail, [] if ok else [{"instance": detail}]


CHECKS = (
    ("stellar_subdivision", 1, check_stellar),
    ("fundamental_class", 2, check_orthants),
    ("hecke_qbinomial", 3, check_hecke),
    ("trace_invariance", 4, check_trace),
    ("odd_canonical_cocycle", 5, check_sym_cocycle),
    ("euler_defect", 6, check_euler),
    ("distribution_relation", 7, check_distribution),
    ("cyclotomic_shadow", 8, check_cyclotomic),
    ("proper_intersection", 9, check_intersect),
    ("sullivan_denominator", 10, check_sullivan),
)


def run_check(name, cfg):
    for nm, crit, fn in CHECKS:
        if nm == name:
            ok, detail, failures = fn(cfg, stream(cfg.seed, nm))
            return {"name": nm, "criterion": crit, "passed": bool(ok),
                    "detail": detail, "failures": failures}
    raise InputError(f"unknown check {name!r}")


def run_suite(cfg, only=None):
    names = [nm for nm, _, _ in CHECKS if only is None or nm in only]
    results = [run_check(nm, cfg) for nm in names]
    return {"config": cfg.to_json(), "passed": all(r["passed"] for r in results),
            "checks": results}


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"

"""Acceptance criteria 1-11, run through the batch suite at seed 7."""
import time

import pytest

from gmcocycle import suite

from conftest import ACCEPTANCE_LINES

SEED = 7


@pytest.fixture(scope="module")
def results():
    cfg = suite.RunConfig(seed=SEED)
    out = {}
    for name, crit, _ in suite.CHECKS:
        t = time.perf_counter()
        r = suite.run_check(name, cfg)
        out[crit] = (r, time.perf_counter() - t)
    return out


def _record(crit, label, ok, note=""):
    ACCEPTANCE_LINES[crit] = f"AC{crit:<2} {'PASS' if ok else 'FAIL'}  {label}" + (f"  ({note})" if note else "")
    assert ok, f"criterion {crit} failed: {note}"


def _res(s):
    return float(s)


def test_ac01_stellar(results):
    r, dt = results[1]
    d = r["detail"]
    ok = (r["passed"] and all(d["by_n"][n]["instances"] >= 50 for n in ("2", "3", "4"))
          and _res(d["max_residual"]) < 1e-9 and dt < 60)
    _record(1, "stellar subdivision", ok, f"max residual {d['max_residual']}, {dt:.1f} s")


def test_ac02_fundamental_class(results):
    r, _ = results[2]
    ok = r["passed"] and r["detail"]["instances"] == 3 and _res(r["detail"]["max_residual"]) < 1e-9
    _record(2, "fundamental class to orientation", ok, f"max residual {r['detail']['max_residual']}")


def test_ac03_hecke(results):
    r, dt = results[3]
    rows = r["detail"]["triples"]
    want = {(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1), (4, 2, 2)}
    ok = r["passed"] and {(x["n"], x["p"], x["i"]) for x in rows} == want and all(x["passed"] for x in rows)
    ok = ok and dt < 120
    _record(3, "Hecke p-binomial multiplicities", ok, f"{len(rows)} triples, {dt:.2f} s")


def test_ac04_trace(results):
    r, _ = results[4]
    d = r["detail"]
    ok = r["passed"] and d["syntactic"] > 0 and d["instances"] == 6 and _res(d["max_residual"]) < 1e-9
    _record(4, "trace invariance", ok, f"max residual {d['max_residual']}")


def test_ac05_odd_cocycle(results):
    r, _ = results[5]
    d = r["detail"]
    ok = r["passed"] and d["instances"] >= 25 and _res(d["max_residual"]) < 1e-9
    _record(5, "odd-n symmetrized cocycle", ok, f"max residual {d['max_residual']}")


def test_ac06_euler(results):
    r, _ = results[6]
    d = r["detail"]
    ok = r["passed"] and d["tuples"] >= 25 and _res(d["spread"]) < 1e-9 and d["coboundary_triples"] > 0
    _record(6, "Euler defect", ok, f"spread {d['spread']}, defects {d['defects']}")


def test_ac07_distribution(results):
    r, _ = results[7]
    d = r["detail"]
    ok = r["passed"] and d["instances"] == 18 and _res(d["max_residual"]) < 1e-9
    _record(7, "distribution relation", ok, f"max residual {d['max_residual']}")


def test_ac08_cyclotomic(results):
    r, _ = results[8]
    d = r["detail"]
    # reduced fractions j/q with 2 <= q <= 12, times k in {2, 3, 4}
    ok = r["passed"] and d["norm_checks"] == 45 * 3 and _res(d["max_residual"]) < 1e-12 and d["fiber_counts"] > 0
    _record(8, "cyclotomic shadow", ok, f"max residual {d['max_residual']}")


def test_ac09_intersection(results):
    r, _ = results[9]
    d = r["detail"]
    last = d["curve"][-1]
    ok = (r["passed"] and d["certified"] >= 50 and d["non_acyclic"] == "Uncertified"
          and d["curve_approaches_face"] and last["t"] == 1e6)
    _record(9, "proper intersection", ok, f"{d['certified']} certified, [[1,-1]] {d['non_acyclic']}")


def test_ac10_sullivan(results):
    r, _ = results[10]
    d = r["detail"]
    ok = r["passed"] and d["n2"] == {"value": 12, "stabilized": True} and d["n1"]["value"] == 2
    _record(10, "Sullivan denominator", ok, f"d_2 = {d['n2']['value']}, d_1 = {d['n1']['value']}")


def test_ac11_determinism():
    cfg = suite.RunConfig(seed=SEED)
    a = suite.dumps(suite.run_suite(cfg))
    b = suite.dumps(suite.run_suite(cfg))
    _record(11, "byte-identical reports", a == b, f"{len(a)} bytes")

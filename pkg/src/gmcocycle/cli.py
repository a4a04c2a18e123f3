"""Command-line front end.

Exit codes: 0 when the requested computation succeeds or the identity holds,
1 when a verified identity fails, 2 on malformed or out-of-domain input.
"""
import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, chains, cocycle, dist, hecke, intersect, latlin, rays, suite
from .errors import (BadHyperplane, ExtensionDependent, GMError, InputError, NearSingular,
                     NonConstantDefect, NonIntegerDefect, NonIntegral)
from .ksym import KElement, generator
from .regulator import compare

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# errors meaning "the input has no value here" rather than "an identity broke"
_INPUT_LIKE = (InputError, ExtensionDependent, BadHyperplane)
_FAILURE_LIKE = (NonConstantDefect, NonIntegerDefect, NonIntegral, NearSingular)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(arg):
    """Inline JSON, or the path of a JSON file."""
    try:
        path = Path(arg)
        text = path.read_text() if path.is_file() else arg
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as err:
        raise InputError(f"cannot read JSON from {arg!r}: {err}") from err


def _point(text):
    try:
        return tuple(latlin.mod1(latlin.to_fraction(x.strip())) for x in text.split(",") if x.strip())
    except (ValueError, ZeroDivisionError) as err:
        raise InputError(f"bad torsion point {text!r}") from err


def _config(args):
    return suite.RunConfig(seed=args.seed, samples=args.samples, tolerance=args.tolerance,
                           precision_bits=args.precision, budget=args.budget, output=args.output)


def _gammas(obj):
    if isinstance(obj, dict):
        obj = obj.get("gammas")
    if not isinstance(obj, list):
        raise InputError("expected a list of matrices (or {\"gammas\": [...]})")
    return [latlin.as_matrix(g, rational=True) for g in obj]


# subcommands: each returns (exit code, report dict, one-line summary)

def cmd_classify(args, cfg):
    tup = rays.from_json(_load(args.rays))
    c = rays.classify(tup)
    rep = {"kind": c.kind.value, "rank": c.rank, "sign": c.sign,
           "witness": None if c.witness is None else [str(v) for v in c.witness]}
    return EXIT_OK, rep, f"{c.kind.value} (rank {c.rank})"


def cmd_realize(args, cfg):
    e = chains.realize(rays.from_json(_load(args.vertices)))
    return EXIT_OK, {"element": e.to_json()}, repr(e)


def cmd_stellar(args, cfg):
    if args.instance:
        obj = _load(args.instance)
        try:
            base, r, m = obj["base"], obj["r"], obj["m"]
        except (KeyError, TypeError) as err:
            raise InputError("stellar instance needs base, r and m") from err
    else:
        if args.n is None:
            raise InputError("give --instance or --n for a random instance")
        base, r, m = chains.random_stellar_instance(args.n, suite.stream(cfg.seed, "cli-stellar"))
    lhs, rhs = chains.stellar_instance(base, r, m)
    rep = compare(lhs, rhs, cfg.plan())
    out = {"instance": {"base": [list(rays.ray(b)) for b in base], "r": r, "m": list(rays.ray(m))},
           "lhs": lhs.to_json(), "rhs": rhs.to_json(), "report": rep.to_json()}
    code = EXIT_OK if rep.verdict == "Equal" else EXIT_FAIL
    return code, out, f"{rep.verdict} (max residual {out['report']['max_residual']})"


def cmd_theta(args, cfg):
    t = _gammas(_load(args.gammas)) if args.gammas else []
    if t and args.n is not None and len(t[0]) != args.n:
        raise InputError("--n does not match the matrix size")
    e = cocycle.theta(t, args.mode, n=args.n)
    cols = cocycle.columns(t, args.n)
    return EXIT_OK, {"columns": [list(c) for c in cols], "element": e.to_json()}, repr(e)


def cmd_defect(args, cfg):
    t = _gammas(_load(args.gammas))
    k, rep = cocycle.euler_defect(t, cfg.plan())
    return EXIT_OK, {"defect": k, "report": rep.to_json()}, f"defect {k}"


def cmd_hecke(args, cfg):
    rep = hecke.verify_hecke(args.n, args.i, args.p, cfg.budget)
    out = rep.to_json()
    s = out["computed"]
    line = f"{'pass' if rep.passed else 'FAIL'}: identity {s['identity']}, others {s['others']}"
    return (EXIT_OK if rep.passed else EXIT_FAIL), out, line


def _element_arg(args, n):
    if args.element:
        e = KElement.from_json(_load(args.element))
        if n is not None and e.n != n:
            raise InputError("--n does not match the element")
        return e
    if n is None:
        raise InputError("give --element or --n")
    return KElement.of(generator(latlin.identity(n)))


def cmd_dist(args, cfg):
    e = _element_arg(args, args.n)
    a = _point(args.a) if args.a else (Fraction(0),) * e.n
    d = dist.LCDistribution(e)
    rep = dist.verify_distribution(d, a, args.k, cfg.plan())
    out = {"source": e.to_json(), "a": [str(x) for x in a], "k": args.k, "report": rep.to_json()}
    code = EXIT_OK if rep.verdict == "Equal" else EXIT_FAIL
    return code, out, f"{rep.verdict} (max residual {out['report']['max_residual']})"


def cmd_specialize(args, cfg):
    e = _element_arg(args, args.n)
    x = _point(args.x)
    syms = dist.specialize(e, x)
    out = {"x": [str(v) for v in x], "symbols": [s.to_json() for s in syms]}
    return EXIT_OK, out, f"{len(syms)} cyclotomic symbols"


def cmd_intersect(args, cfg):
    M = _load(args.matrix)
    if isinstance(M, dict):
        M = M.get("matrix")
    rep = intersect.certify_infinity_faces(M)
    out = rep.to_json()
    if not rep.certified:
        pts = intersect.curve_diagnostic(M)
        out["curve"] = [p.to_json() for p in pts]
        out["curve_approaches_face"] = intersect.curve_approaches_face(pts)
    return EXIT_OK, out, rep.status


def cmd_sullivan(args, cfg):
    excl = [int(p) for p in args.exclude.split(",") if p.strip()] if args.exclude else []
    r = cocycle.sullivan_d(args.n, excl, args.bound)
    out = {"n": args.n, "excluded": excl, "bound": args.bound, "value": r.value,
           "stabilized": r.stabilized, "count": r.count}
    return EXIT_OK, out, f"{r.value}{'' if r.stabilized else ' (not stabilized)'}"


def cmd_suite(args, cfg):
    only = set(args.only.split(",")) if args.only else None
    report = suite.run_suite(cfg, only)
    lines = [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['criterion']:>2} {c['name']}"
             for c in report["checks"]]
    return (EXIT_OK if report["passed"] else EXIT_FAIL), report, "\n".join(lines)


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=24)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--precision", type=int, default=None,
                   help=f"working precision in bits (default ${suite.PRECISION_ENV} or 256)")
    p.add_argument("--budget", type=int, default=hecke.BUDGET)
    p.add_argument("--output", default=None, help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report")


def build_parser():
    parser = _Parser(prog="gmcocycle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classify", help="classify a ray tuple")
    p.add_argument("--rays", required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("realize", help="symbol of a simplex")
    p.add_argument("--vertices", required=True)
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("stellar", help="check one stellar subdivision relation")
    p.add_argument("--instance")
    p.add_argument("--n", type=int)
    p.set_defaults(fn=cmd_stellar)

    p = sub.add_parser("theta", help="cocycle value on a matrix tuple")
    p.add_argument("--gammas")
    p.add_argument("--n", type=int)
    p.add_argument("--mode", choices=("plain", "sym"), default="plain")
    p.set_defaults(fn=cmd_theta)

    p = sub.add_parser("defect", help="Euler defect of an n-tuple")
    p.add_argument("--gammas", required=True)
    p.set_defaults(fn=cmd_defect)

    p = sub.add_parser("hecke", help="Hecke operator on the identity class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(fn=cmd_hecke)

    p = sub.add_parser("dist", help="distribution relation")
    dsub = p.add_subparsers(dest="action", parser_class=_Parser)
    v = dsub.add_parser("verify")
    v.add_argument("--n", type=int)
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--a", default=None)
    v.add_argument("--element")
    v.set_defaults(fn=cmd_dist)
    for q in (p, v):
        _common(q)

    p = sub.add_parser("specialize", help="specialize an element at a torsion point")
    p.add_argument("--element")
    p.add_argument("--n", type=int)
    p.add_argument("--x", required=True)
    p.set_defaults(fn=cmd_specialize)

    p = sub.add_parser("intersect", help="certify proper intersection with cube faces")
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=cmd_intersect)

    p = sub.add_parser("sullivan", help="Sullivan denominator gcd")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=50)
    p.add_argument("--exclude", default="")
    p.set_defaults(fn=cmd_sullivan)

    p = sub.add_parser("suite", help="run the full verification suite")
    p.add_argument("--only", default=None, help="comma-separated check names")
    p.set_defaults(fn=cmd_suite)

    for name, sp in sub.choices.items():
        if name != "dist":
            _common(sp)
    return parser


def _diagnostic(kind, err):
    out = {"error": kind, "message": str(err)}
    for attr in ("vertices", "where", "term", "slot"):
        val = getattr(err, attr, None)
        if val is not None:
            out[attr] = [list(v) for v in val] if attr == "vertices" else val
    return out


def run(argv=None):
    """Parse and dispatch; returns (exit code, output text, is_diagnostic)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        return EXIT_INPUT, suite.dumps(_diagnostic("UsageError", err)), True
    if not getattr(args, "fn", None):
        return EXIT_INPUT, suite.dumps(_diagnostic("UsageError", "no command given")), True
    try:
        if args.precision is None:
            args.precision = suite.default_precision()
        cfg = _config(args)
        code, report, line = args.fn(args, cfg)
    except _FAILURE_LIKE as err:
        return EXIT_FAIL, suite.dumps(_diagnostic(type(err).__name__, err)), True
    except _INPUT_LIKE as err:
        return EXIT_INPUT, suite.dumps(_diagnostic(type(err).__name__, err)), True
    except (ValueError, TypeError, ZeroDivisionError) as err:
        return EXIT_INPUT, suite.dumps(_diagnostic("InputError", err)), True
    except GMError as err:
        return EXIT_FAIL, suite.dumps(_diagnostic(type(err).__name__, err)), True
    if args.output:
        Path(args.output).write_text(suite.dumps(report))
        return code, line + "\n", False
    return code, (suite.dumps(report) if args.json else line + "\n"), False


def main(argv=None):
    code, text, diag = run(argv)
    (sys.stderr if diag else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

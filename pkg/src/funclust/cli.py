"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 invalid input, 3 infeasible or size guard,
4 no convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ._numeric import exact_value, fmt, jsonable
from .cut_tree import decompose, is_tree_metric
from .io import ParseError, detect_format, emit_dot, emit_matrix, emit_sieve, parse_matrix
from .projections import ConvergenceError, Discretize, PathMetric, Quotient, project
from .sieves import cech_sieve, iterate_to_stable, rips_sieve, sl_sieve
from .tight_span import SizeGuardError, tight_span_vertices
from .weights import (
    INF,
    AmSpace,
    ASpace,
    IntegerGrid,
    Metric,
    QMetric,
    RhoInframetric,
    RhoRelaxed,
    Ultrametric,
    ValidationError,
    satisfies,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_NO_CONVERGENCE = 0, 1, 2, 3, 4

METHODS = {"rips": rips_sieve, "sl": sl_sieve, "cech": cech_sieve}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _number(text: str, what: str):
    if text is None:
        return None
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    x = exact_value(text)
    if x is None:
        raise UsageError(f"--{what}: not a number: {text!r}")
    return x


def _classes(text: str, labels) -> tuple:
    lookup = {str(p): p for p in labels}
    out = []
    for chunk in text.split(";"):
        names = [s.strip() for s in chunk.split(",") if s.strip()]
        missing = [s for s in names if s not in lookup]
        if missing:
            raise UsageError(f"--classes: unknown labels {missing}")
        out.append(tuple(lookup[s] for s in names))
    covered = {p for c in out for p in c}
    out += [(p,) for p in labels if p not in covered]
    return tuple(out)


def _kind(name: str, args, labels=None):
    q, rho, grid, m = (_number(getattr(args, k, None), k) for k in ("q", "rho", "grid", "m"))
    try:
        if name in ("metric", "met", "path"):
            return Metric()
        if name in ("ult", "ultrametric"):
            return Ultrametric()
        if name in ("q", "qmetric"):
            if q is None:
                raise UsageError("--q is required for q-metrics")
            return QMetric(q)
        if name in ("rho", "inframetric"):
            if rho is None:
                raise UsageError("--rho is required for inframetrics")
            return RhoInframetric(rho)
        if name in ("relaxed", "rho-relaxed"):
            if rho is None:
                raise UsageError("--rho is required for relaxed metrics")
            return RhoRelaxed(rho)
        if name in ("aspace", "a"):
            return ASpace()
        if name in ("am", "amspace"):
            return AmSpace(int(m) if m is not None else 4)
        if name == "grid":
            return IntegerGrid(grid if grid is not None else 1)
        if name == "quotient":
            if not getattr(args, "classes", None):
                raise UsageError("--classes is required for quotients")
            return Quotient(_classes(args.classes, labels))
    except ValueError as e:
        raise UsageError(str(e)) from None
    raise UsageError(f"unknown domain {name!r}")


def _projection_kind(name: str, args, labels):
    kind = _kind(name, args, labels)
    if isinstance(kind, Metric):
        return PathMetric()
    if isinstance(kind, IntegerGrid):
        return Discretize(step=kind.step, path_metric=getattr(args, "path_metric", False))
    if isinstance(kind, (RhoRelaxed, AmSpace)):
        raise UsageError(f"no projection is available for {name!r}")
    return kind


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", default="-", help="matrix file (default: stdin)")
    common.add_argument("--format", choices=("csv", "json"), help="matrix format (default: detect)")
    common.add_argument("--output", "-o", default="-", help="output file (default: stdout)")
    common.add_argument("--dot", help="also write a DOT rendering to this file")
    common.add_argument("--tol", type=float, help="work in floating point with this tolerance")

    p = _Parser(prog="funclust", description="Functorial clustering toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("validate", parents=[common], help="check that the input is a weight")

    c = sub.add_parser("check", parents=[common], help="test a domain predicate")
    c.add_argument("--predicate", required=True)
    for flag in ("q", "rho", "grid", "m"):
        c.add_argument(f"--{flag}")

    pr = sub.add_parser("project", parents=[common], help="canonical projection onto a domain")
    pr.add_argument("--domain", required=True)
    for flag in ("q", "rho", "grid"):
        pr.add_argument(f"--{flag}")
    pr.add_argument("--classes", help='partition as "a,b;c,d"; unlisted points are singletons')
    pr.add_argument("--path-metric", action="store_true", help="with --domain=grid, also close under paths")

    s = sub.add_parser("sieve", parents=[common], help="compute a sieve")
    s.add_argument("--method", choices=sorted(METHODS), required=True)
    s.add_argument("--project", help="project onto this domain first")
    for flag in ("q", "rho", "grid"):
        s.add_argument(f"--{flag}")
    s.add_argument("--classes")

    it = sub.add_parser("iterate", parents=[common], help="iterate J o method to a fixed point")
    it.add_argument("--method", choices=sorted(METHODS), default="cech")
    it.add_argument("--until-stable", action="store_true", required=True)
    it.add_argument("--max-iter", type=int, default=100)

    sub.add_parser("tightspan", parents=[common], help="tight-span vertices and root")

    cd = sub.add_parser("cutdec", parents=[common], help="exact cut decomposition")
    cd.add_argument("--strict", action="store_true", help="exit 3 when no decomposition exists")

    sub.add_parser("treecheck", parents=[common], help="four-point condition")
    return p


def _read(args):
    text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    fmt_ = args.format or detect_format(text)
    u = parse_matrix(text, fmt_, exact=False if args.tol is not None else None)
    return u, fmt_


def _write(path: str, text: str, stdout) -> None:
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _label(p):
    return p if isinstance(p, str) else jsonable(p)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args, stdout, stderr)
    except UsageError as e:
        stderr.write(f"{e}\n")
        return EXIT_USAGE
    except ParseError as e:
        stderr.write(f"parse error: {e}\n")
        return EXIT_INVALID
    except ValidationError as e:
        for prob in e.problems:
            stderr.write(f"invalid: {prob}\n")
        return EXIT_INVALID
    except SizeGuardError as e:
        stderr.write(f"size guard: {e}\n")
        return EXIT_INFEASIBLE
    except ConvergenceError as e:
        stderr.write(f"no convergence: {e}\n")
        return EXIT_NO_CONVERGENCE
    except OSError as e:
        stderr.write(f"{e}\n")
        return EXIT_USAGE


def _dispatch(args, stdout, stderr) -> int:
    u, in_fmt = _read(args)
    tol = args.tol
    out_fmt = args.format or in_fmt
    cmd = args.command

    if cmd == "validate":
        mode = "exact" if u.exact else "float"
        _write(args.output, f"ok: {u.n} points, {mode}\n", stdout)
        return EXIT_OK

    if cmd == "check":
        ok = satisfies(u, _kind(args.predicate, args, u.points), tol)
        _write(args.output, "true\n" if ok else "false\n", stdout)
        return EXIT_OK

    if cmd == "project":
        v = project(u, _projection_kind(args.domain, args, u.points), tol)
        _write(args.output, emit_matrix(v, out_fmt), stdout)
        return EXIT_OK

    if cmd == "sieve":
        if args.project:
            u = project(u, _projection_kind(args.project, args, u.points), tol)
        s = METHODS[args.method](u)
        _write(args.output, emit_sieve(s), stdout)
        if args.dot:
            _write(args.dot, emit_dot(s), stdout)
        return EXIT_OK

    if cmd == "iterate":
        try:
            v, rounds = iterate_to_stable(METHODS[args.method], u, args.max_iter)
        except RuntimeError as e:
            raise ConvergenceError(str(e), u, args.max_iter) from None
        stderr.write(f"stable after {rounds} rounds\n")
        _write(args.output, emit_matrix(v, out_fmt), stdout)
        return EXIT_OK

    if cmd == "tightspan":
        r = tight_span_vertices(u, tol)
        doc = {
            "points": [_label(p) for p in u.points],
            "diameter": jsonable(r.diameter),
            "vertices": [[jsonable(x) for x in f.values] for f in r.vertices],
            "heights": [jsonable(f.height) for f in r.vertices],
            "edges": [list(e) for e in r.edges],
            "root": None if r.root is None else [jsonable(x) for x in r.root.values],
        }
        _write(args.output, _dump(doc), stdout)
        if args.dot:
            _write(args.dot, emit_dot(r), stdout)
        return EXIT_OK

    if cmd == "cutdec":
        res = decompose(u)
        if res.feasible:
            doc = {"feasible": True, "cuts_checked": res.cuts_checked,
                   "decomposition": [{"cut": [_label(p) for p in c.ground if p in c.side], "weight": jsonable(lam)}
                                     for c, lam in res.decomposition.terms]}
        else:
            doc = {"feasible": False, "cuts_checked": res.cuts_checked,
                   "certificate": [{"pair": [_label(x), _label(y)], "weight": jsonable(v)}
                                   for (x, y), v in res.certificate.items()]}
            stderr.write(f"infeasible: certificate checked against all {res.cuts_checked} cuts\n")
        _write(args.output, _dump(doc), stdout)
        return EXIT_INFEASIBLE if (args.strict and not res.feasible) else EXIT_OK

    if cmd == "treecheck":
        ok = is_tree_metric(u, tol)
        _write(args.output, "true\n" if ok else "false\n", stdout)
        return EXIT_OK
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands: eval (invariants at a point), grid (sample a surface to
CSV), classify (predicate report over a grid), verify (built-in
identity suite), ode (profile integration / closed-form check), and
ingest (finite-difference pipeline on sampled heights).

Exit codes: 0 success, 1 a requested predicate or check failed,
2 usage or parse error, 3 evaluation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

from . import jet
from .classify import (PREDICATES, classify_surface, integrate_profile_ode,
                       minimal_aminov_profile, minimality_residual,
                       report_to_json)
from .expr import ExprError, profile_eval
from .grid import (RESULT_HEADER, GridSpec, evaluate_discrete, export_csv,
                   ingest_samples, read_samples_csv, sample_grid)
from .invariants import ConsistencyError, invariants_at
from .patch import (FAMILIES, make_aminov, make_explicit, make_gradient,
                    make_translation, patch_from_json)
from .selfcheck import run_all

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_IO = 4

DEFAULT_NODES = 41
DEFAULT_TOL = 1e-8

PREDICATE_ALIASES = {"wintgen": "wintgen_ideal", "pseudo": "pseudo_umbilical",
                     "k+kn": "k_plus_kn_zero"}

ODE_HEADER = ("u", "r", "rp", "residual")


def _add_surface_flags(p):
    grp = p.add_argument_group("surface (exactly one source)")
    grp.add_argument("--f", metavar="EXPR", help="height f(u, v)")
    grp.add_argument("--g", metavar="EXPR", help="height g(u, v)")
    grp.add_argument("--family", choices=FAMILIES,
                     help="surface family (inferred from payload flags "
                          "when omitted)")
    grp.add_argument("--r", metavar="EXPR",
                     help="radius profile r(u) for the rotational family")
    grp.add_argument("--f3", metavar="EXPR",
                     help="translation term f3(u) of f = f3(u) + g3(v)")
    grp.add_argument("--g3", metavar="EXPR",
                     help="translation term g3(v) of f = f3(u) + g3(v)")
    grp.add_argument("--f4", metavar="EXPR",
                     help="translation term f4(u) of g = f4(u) + g4(v)")
    grp.add_argument("--g4", metavar="EXPR",
                     help="translation term g4(v) of g = f4(u) + g4(v)")
    grp.add_argument("--p", metavar="EXPR",
                     help="first gradient component p(u, v)")
    grp.add_argument("--q", metavar="EXPR",
                     help="second gradient component q(u, v)")
    grp.add_argument("--patch", metavar="FILE",
                     help="JSON patch file produced by this package")


def _add_grid_flags(p):
    grp = p.add_argument_group("grid")
    grp.add_argument("--u0", type=float, default=-1.0,
                     help="lower u bound (default: %(default)s)")
    grp.add_argument("--u1", type=float, default=1.0,
                     help="upper u bound (default: %(default)s)")
    grp.add_argument("--v0", type=float, default=-1.0,
                     help="lower v bound (default: %(default)s)")
    grp.add_argument("--v1", type=float, default=1.0,
                     help="upper v bound (default: %(default)s)")
    grp.add_argument("--nu", type=int, default=DEFAULT_NODES,
                     help="nodes along u (default: %(default)s)")
    grp.add_argument("--nv", type=int, default=DEFAULT_NODES,
                     help="nodes along v (default: %(default)s)")


def _add_output_flags(p, default_format):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL,
                   help="tolerance for checks (default: %(default)s)")
    p.add_argument("--out", metavar="PATH",
                   help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"),
                   default=default_format,
                   help="output format (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monge4",
        description="Curvature invariants and classification predicates "
                    "for two-height-channel graph surfaces.")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                metavar="SUBCOMMAND")

    p = sub.add_parser("eval", help="invariants at a single point",
                       description="Evaluate K, K_N, H1, H2 and |H| at "
                                   "one parameter point.")
    _add_surface_flags(p)
    _add_grid_flags(p)
    p.add_argument("-u", "--u", type=float, required=True, dest="u",
                   help="u coordinate of the point")
    p.add_argument("-v", "--v", type=float, required=True, dest="v",
                   help="v coordinate of the point")
    _add_output_flags(p, "json")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("grid", help="sample invariants over a grid",
                       description="Evaluate the pipeline on a uniform "
                                   "grid and write the result table.")
    _add_surface_flags(p)
    _add_grid_flags(p)
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads for sampling (default: %(default)s)")
    _add_output_flags(p, "csv")
    p.set_defaults(handler=cmd_grid)

    p = sub.add_parser("classify", help="test predicates over a grid",
                       description="Check classification predicates on a "
                                   "grid and print the report.")
    _add_surface_flags(p)
    _add_grid_flags(p)
    p.add_argument("--predicates", metavar="LIST",
                   help="comma-separated predicates to require "
                        "(default: all of %s)" % ",".join(PREDICATES))
    _add_output_flags(p, "json")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify", help="run the built-in identity suite",
                       description="Run every built-in consistency check "
                                   "and print one status line per check.")
    p.add_argument("--out", metavar="PATH",
                   help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"),
                   default="text",
                   help="output format (default: %(default)s)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("ode", help="integrate or check a radius profile",
                       description="With --a/--b/--sigma, tabulate the "
                                   "closed-form minimal profile and its "
                                   "equation residual; with --r0/--r0p, "
                                   "integrate the profile equation "
                                   "numerically (classic fourth-order "
                                   "Runge-Kutta).")
    p.add_argument("--a", type=float, help="closed-form scale parameter")
    p.add_argument("--b", type=float, default=0.0,
                   help="closed-form shift parameter (default: %(default)s)")
    p.add_argument("--sigma", type=int, choices=(1, -1), default=1,
                   help="closed-form sign parameter (default: %(default)s)")
    p.add_argument("--r0", type=float, help="initial radius r(lo)")
    p.add_argument("--r0p", type=float, help="initial slope r'(lo)")
    p.add_argument("--range", nargs=2, type=float, default=[-1.0, 1.0],
                   metavar=("LO", "HI"),
                   help="integration range (default: %(default)s)")
    p.add_argument("--steps", type=int, default=1000,
                   help="number of steps (default: %(default)s)")
    _add_output_flags(p, "csv")
    p.set_defaults(handler=cmd_ode)

    p = sub.add_parser("ingest", help="finite-difference pipeline on samples",
                       description="Read height samples from CSV (columns "
                                   "u,v,f,g or u,v,f), estimate jets by "
                                   "central differences and write the "
                                   "result table.")
    p.add_argument("input", metavar="FILE", help="sample CSV file")
    p.add_argument("--mode", choices=("monge4", "monge3"),
                   help="channel layout (inferred from the header "
                        "when omitted)")
    p.add_argument("--hu", type=float, help="expected u spacing (checked)")
    p.add_argument("--hv", type=float, help="expected v spacing (checked)")
    _add_output_flags(p, "csv")
    p.set_defaults(handler=cmd_ingest)

    return parser


def _build_patch(args):
    """Construct the surface from exactly one source of flags."""
    groups = {
        "explicit": [args.f, args.g],
        "translation": [args.f3, args.g3, args.f4, args.g4],
        "aminov": [args.r],
        "gradient": [args.p, args.q],
    }
    given = [name for name, flags in groups.items()
             if any(x is not None for x in flags)]
    if args.patch is not None:
        if given or args.family is not None:
            raise ValueError("--patch cannot be combined with expression "
                             "flags")
        with open(args.patch) as fh:
            return patch_from_json(fh.read())
    family = args.family
    if family is None:
        if len(given) != 1:
            raise ValueError("give exactly one surface source: --f/--g, "
                             "--f3/--g3/--f4/--g4, --r, --p/--q or --patch")
        family = given[0]
    elif given and given != [family]:
        raise ValueError(f"flags for {given} do not match --family {family}")
    flags = groups[family]
    if any(x is None for x in flags):
        names = {"explicit": "--f and --g",
                 "translation": "--f3, --g3, --f4 and --g4",
                 "aminov": "--r",
                 "gradient": "--p and --q"}[family]
        raise ValueError(f"family {family} needs {names}")
    if family == "explicit":
        return make_explicit(args.f, args.g)
    if family == "translation":
        return make_translation(args.f3, args.f4, args.g3, args.g4)
    if family == "aminov":
        return make_aminov(args.r, (args.u0, args.u1))
    patch = make_gradient(args.p, args.q)
    if patch.gradient_warning:
        print(f"warning: {patch.gradient_warning}", file=sys.stderr)
    return patch


def _grid_spec(args) -> GridSpec:
    return GridSpec(args.u0, args.u1, args.v0, args.v1, args.nu, args.nv)


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _note(message: str, out) -> None:
    # keep stdout clean when it carries the payload
    stream = sys.stdout if out is not None else sys.stderr
    print(message, file=stream)


def _json_float(x):
    return x if math.isfinite(x) else None


def _render_rows(header, rows, fmt):
    """Render a float table (last column may be a string flag)."""
    if fmt == "json":
        doc = []
        for row in rows:
            item = {}
            for name, cell in zip(header, row):
                item[name] = cell if isinstance(cell, str) else _json_float(cell)
            doc.append(item)
        return json.dumps(doc, indent=2) + "\n"
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else repr(cell)
                              for cell in row))
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> int:
    patch = _build_patch(args)
    inv = invariants_at(patch, args.u, args.v)
    values = [("K", inv.K), ("KN", inv.KN), ("H1", inv.H1),
              ("H2", inv.H2), ("Hnorm", inv.Hnorm)]
    if args.format == "json":
        text = json.dumps(dict(values), indent=2) + "\n"
    elif args.format == "csv":
        text = (",".join(name for name, _ in values) + "\n"
                + ",".join(repr(val) for _, val in values) + "\n")
    else:
        text = "".join(f"{name} = {val!r}\n" for name, val in values)
    _emit(text, args.out)
    return EXIT_OK


def cmd_grid(args) -> int:
    patch = _build_patch(args)
    spec = _grid_spec(args)
    result = sample_grid(patch, spec, workers=args.workers)
    _emit_grid_result(result, args)
    flagged = sum(1 for r in result.rows if r.flag)
    _note(f"sampled {len(result.rows)} nodes ({flagged} flagged)", args.out)
    return EXIT_OK


def _emit_grid_result(result, args) -> None:
    if args.format == "csv":
        if args.out is None:
            export_csv(result, sys.stdout)
        else:
            export_csv(result, args.out)
        return
    if args.format == "json":
        rows = [tuple(asdict(r)[name] for name in RESULT_HEADER)
                for r in result.rows]
        _emit(_render_rows(RESULT_HEADER, rows, "json"), args.out)
        return
    clean = [r for r in result.rows if not r.flag]
    flagged = len(result.rows) - len(clean)
    lines = [f"grid: {result.spec.u0} .. {result.spec.u1} x "
             f"{result.spec.v0} .. {result.spec.v1}, "
             f"{result.spec.nu} x {result.spec.nv}",
             f"rows: {len(result.rows)} (flagged: {flagged})"]
    for label, pick in (("max |K|", lambda r: abs(r.K)),
                        ("max |KN|", lambda r: abs(r.KN)),
                        ("max |H|", lambda r: r.Hnorm)):
        value = repr(max(map(pick, clean))) if clean else "n/a"
        lines.append(f"{label}: {value}")
    _emit("\n".join(lines) + "\n", args.out)


def _parse_predicates(text):
    names = []
    for raw in text.split(","):
        name = raw.strip().replace("-", "_")
        name = PREDICATE_ALIASES.get(name, name)
        if name not in PREDICATES:
            raise ValueError(f"unknown predicate {raw.strip()!r}; choose "
                             f"from {', '.join(PREDICATES)}")
        if name not in names:
            names.append(name)
    return names


def cmd_classify(args) -> int:
    patch = _build_patch(args)
    spec = _grid_spec(args)
    requested = (_parse_predicates(args.predicates)
                 if args.predicates else list(PREDICATES))
    report = classify_surface(patch, spec, tol=args.tol)
    if args.format == "json":
        text = report_to_json(report) + "\n"
    elif args.format == "csv":
        lines = ["predicate,verdict,max_residual,normalized_residual"]
        for name in PREDICATES:
            pr = report.predicates[name]
            lines.append(f"{name},{pr.verdict},{pr.max_residual!r},"
                         f"{pr.normalized_residual!r}")
        text = "\n".join(lines) + "\n"
    else:
        lines = []
        for name in PREDICATES:
            pr = report.predicates[name]
            lines.append(f"{name}: {pr.verdict} (normalized residual "
                         f"{pr.normalized_residual!r})")
        lines.append(f"first normal bundle rank: {report.first_normal_rank}")
        if report.chen_qualifier:
            lines.append(f"chen qualifier: {report.chen_qualifier}")
        lines.append(f"failed points: {report.failed_points}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    ok = all(report.predicates[name].verdict == "holds"
             for name in requested)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    results = run_all()
    if args.format == "json":
        doc = [{"name": r.name, "ok": r.ok, "detail": r.detail}
               for r in results]
        text = json.dumps(doc, indent=2) + "\n"
    elif args.format == "csv":
        lines = ["check,status,detail"]
        for r in results:
            detail = '"%s"' % r.detail.replace('"', '""')
            lines.append(f"{r.name},{'pass' if r.ok else 'fail'},{detail}")
        text = "\n".join(lines) + "\n"
    else:
        width = max(len(r.name) for r in results)
        lines = [f"{'PASS' if r.ok else 'FAIL'}  {r.name.ljust(width)}  "
                 f"{r.detail}" for r in results]
        failed = sum(1 for r in results if not r.ok)
        lines.append(f"{len(results) - failed} of {len(results)} checks "
                     f"passed")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_ode(args) -> int:
    closed = args.a is not None
    numeric = args.r0 is not None or args.r0p is not None
    if closed == numeric:
        raise ValueError("give either --a (closed form) or --r0 and --r0p "
                         "(numerical integration)")
    lo, hi = args.range
    if closed:
        profile = minimal_aminov_profile(args.a, args.b, args.sigma)
        if args.steps < 1:
            raise ValueError("need at least 1 step")
        rows = []
        for k in range(args.steps + 1):
            t = k / args.steps
            u = lo * (1.0 - t) + hi * t
            r = profile_eval(profile, u)
            rows.append((u, r.val, r.d1, minimality_residual(r)))
    else:
        if args.r0 is None or args.r0p is None:
            raise ValueError("numerical integration needs both --r0 "
                             "and --r0p")
        rows = integrate_profile_ode(args.r0, args.r0p, (lo, hi), args.steps)
    if args.format == "text":
        worst = max(abs(row[3]) for row in rows)
        text = (f"nodes: {len(rows)}\n"
                f"max |residual|: {worst!r}\n")
    else:
        text = _render_rows(ODE_HEADER, rows, args.format)
    _emit(text, args.out)
    worst = max(abs(row[3]) for row in rows)
    _note(f"{len(rows)} nodes, max |residual| = {worst!r}", args.out)
    return EXIT_OK


def cmd_ingest(args) -> int:
    records = read_samples_csv(args.input)
    dp = ingest_samples(records, hu=args.hu, hv=args.hv, mode=args.mode,
                        source=args.input)
    result = evaluate_discrete(dp)
    _emit_grid_result(result, args)
    flagged = sum(1 for r in result.rows if r.flag and
                  r.flag != "boundary")
    _note(f"evaluated {dp.nu} x {dp.nv} samples from {args.input} "
          f"({flagged} flagged beyond the boundary ring)", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if not err.code else int(err.code)
    try:
        return args.handler(args)
    except ExprError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (jet.DomainError, ConsistencyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_EVAL
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

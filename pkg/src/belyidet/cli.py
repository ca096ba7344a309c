"""Command-line front end.

Exit status: 0 on success, 2 for invalid input, 3 when independent routes
disagree beyond tolerance (or a stationarity check fails).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .accessory import SUM_RULE_TOL, pullback_accessory, residues_via_contour, sum_rule_residuals
from .basedet import CurvedBaseUnavailable, default_provider, load_base_table
from .belyi import RamificationData, analyze, catalog, map_from_json
from .elliptic import (
    det_lambda,
    det_lambda_flat_oracle,
    find_stationary_tau,
    lambda_of_tau,
    landscape_rows,
    log_det_tau,
)
from .errors import DomainError, RouteDisagreement
from .flatdet import config_from_json, flat_log_det, metric_area_quadrature, rescale_log_det
from .maindet import (
    PLATONIC_TOL,
    family_log_det,
    flat_pullback_log_det,
    liouville_action,
    platonic_log_det,
    theorem_main,
)
from .specfun import TriangleDivisor
from .stationarity import check_platonic_stationarity

EXIT_OK, EXIT_INPUT, EXIT_ROUTES = 0, 2, 3
CONTOUR_TOL = 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.15g}{x.imag:+.15g}i"
    return f"{x:.15g}"


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _emit(obj: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n")
        return
    for key, val in obj.items():
        if isinstance(val, dict):
            out.write(f"{key}:\n")
            for k2, v2 in val.items():
                out.write(f"  {k2}: {_text(v2)}\n")
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            out.write(f"{key}:\n")
            for row in val:
                out.write("  " + ", ".join(f"{k}={_text(v)}" for k, v in row.items()) + "\n")
        else:
            out.write(f"{key}: {_text(val)}\n")


def _text(v) -> str:
    if isinstance(v, dict) and set(v) == {"value", "deviation"}:
        return f"{fmt(v['value'])}  (deviation {v['deviation']:.3e})"
    if isinstance(v, (float, complex)):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text(x) for x in v) + "]"
    return str(v)


# ---------------------------------------------------------------------------
# argument helpers

def _floats(s: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(v) for v in s.split(",")]
    except ValueError as exc:
        raise DomainError(f"expected comma-separated numbers, got {s!r}") from exc
    if n is not None and len(vals) != n:
        raise DomainError(f"expected {n} comma-separated numbers, got {s!r}")
    return vals


def _complex(s: str) -> complex:
    re, im = _floats(s, 2)
    return complex(re, im)


def _triangle(s: str) -> TriangleDivisor:
    return TriangleDivisor(*_floats(s, 3))


def parse_grid(s: str) -> list[float]:
    """"start:stop:step" with both ends included; the decimal strings are
    stepped exactly so that grid points such as 0 or -0.5 come out exact."""
    try:
        a, b, h = (Fraction(v.strip()) for v in s.split(":"))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"grid must be start:stop:step, got {s!r}") from exc
    if h == 0 or (b - a) * h < 0:
        raise DomainError(f"grid step {float(h)} does not move from {float(a)} toward {float(b)}")
    n = math.floor((b - a) / h)
    return [float(a + i * h) for i in range(n + 1)]


def _load_json_arg(s: str) -> dict:
    p = Path(s)
    try:
        text = p.read_text() if p.exists() else s
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"not a JSON file or JSON text: {s!r} ({exc})") from exc


def _ram(args) -> RamificationData:
    if args.catalog:
        return analyze(catalog(args.catalog))
    if args.map:
        return analyze(map_from_json(_load_json_arg(args.map)))
    raise DomainError("give --catalog NAME or --map FILE.json")


def _provider(args):
    table = load_base_table(args.base_table) if getattr(args, "base_table", None) else None
    return default_provider(table)


def _routes_block(routes: dict[str, float]) -> dict:
    keys = list(routes)
    ref = routes[keys[0]]
    return {k: {"value": v, "deviation": v - ref} for k, v in routes.items()}


# ---------------------------------------------------------------------------
# subcommands

def cmd_analyze(args, out) -> int:
    ram = _ram(args)
    pts = []
    for p in ram.points:
        pts.append({
            "x": "inf" if p.is_infinity else p.location, "fiber": p.fiber,
            "ord": p.ord, "c": p.c, "d": p.d,
        })
    _emit({
        "map": ram.f.name or "(user map)",
        "degree": ram.degree,
        "C_f": ram.C_f,
        "C_f_routes": _routes_block({"local": ram.C_f_local, "pairwise": ram.C_f_pairwise}),
        "A_f": ram.A_f,
        "A_f_at_infinity": ram.A_f_remark,
        "A_f_probe_spread": ram.A_f_spread,
        "points": pts,
    }, args.json, out)
    return EXIT_OK


def cmd_det_flat(args, out) -> int:
    cfg = config_from_json(_load_json_arg(args.config))
    res = flat_log_det(cfg)
    routes = {"period-area": res.log_det}
    if args.quadrature:
        S = metric_area_quadrature(cfg)
        routes["quadrature-area"] = flat_log_det(cfg, raw_area=S).log_det
    dev = max(abs(v - res.log_det) for v in routes.values())
    _emit({"log_det": res.log_det, "area": cfg.target_area, "routes": _routes_block(routes)}, args.json, out)
    if dev > (args.tol if args.tol is not None else 1e-6):
        return EXIT_ROUTES
    return EXIT_OK


def cmd_det_belyi(args, out) -> int:
    ram = _ram(args)
    t = _triangle(args.triangle)
    base = _provider(args)(t)
    rep = theorem_main(ram, base)
    area = args.area if args.area is not None else rep.area
    main = rescale_log_det(rep.as_result(), area).log_det
    routes = {"theorem-main": main}
    if base.kind == "flat3":
        routes["flat-cones"] = rescale_log_det(flat_pullback_log_det(ram, base), area).log_det
    report = {
        "log_det": main, "area": area, "degree": ram.degree,
        "pullback_orders": list(rep.pullback.all_orders),
        "terms": rep.terms, "routes": _routes_block(routes),
        "beyond_theorem": rep.meta["beyond_theorem"],
    }
    if args.liouville:
        report["liouville_action"] = liouville_action(ram, base, rep.log_det)
    _emit(report, args.json, out)
    tol = args.tol if args.tol is not None else PLATONIC_TOL
    return EXIT_ROUTES if max(abs(v - main) for v in routes.values()) > tol else EXIT_OK


def cmd_det_family(args, out) -> int:
    t = _triangle(args.triangle)
    base = _provider(args)(t)
    fam = family_log_det(args.family, t, base, args.ell)
    name = f"{args.family}({args.ell})" if args.family in ("cyclic", "dihedral") else args.family
    main = theorem_main(analyze(catalog(name)), base)
    routes = {"family": fam.log_det, "theorem-main": main.log_det}
    _emit({"log_det": fam.log_det, "area": fam.area, "routes": _routes_block(routes)}, args.json, out)
    tol = args.tol if args.tol is not None else 1e-8
    return EXIT_ROUTES if abs(fam.log_det - main.log_det) > tol else EXIT_OK


def cmd_det_platonic(args, out) -> int:
    tol = args.tol if args.tol is not None else PLATONIC_TOL
    res = platonic_log_det(args.solid, args.beta, _provider(args), ell=args.ell, tol=tol)
    _emit({
        "solid": args.solid if args.ell is None else f"{args.solid}({args.ell})",
        "beta": args.beta, "area": res.area, "log_det": res.log_det,
        "max_deviation": res.extras["max_deviation"],
        "routes": _routes_block(res.extras["routes"]),
        "unavailable": res.extras["unavailable"],
    }, args.json, out)
    return EXIT_OK


def cmd_accessory(args, out) -> int:
    ram = _ram(args)
    t = _triangle(args.triangle)
    sd = pullback_accessory(ram, t, tol=args.tol if args.tol is not None else SUM_RULE_TOL)
    rows, worst = [], 0.0
    fin = 0
    for k, p in enumerate(ram.points):
        if p.is_infinity:
            s, h, where = sd.s_inf, sd.h_inf, "inf"
        else:
            s, h, where = sd.s[fin], sd.h[fin], p.location
            fin += 1
        row = {"x": where, "fiber": p.fiber, "s": s, "h": h}
        if not args.no_contour:
            cs, ch = residues_via_contour(ram, t, k)
            row["contour_deviation"] = max(abs(cs - s), abs(ch - h))
            worst = max(worst, row["contour_deviation"])
        rows.append(row)
    _emit({"points": rows, "sum_rule_residuals": list(sum_rule_residuals(sd)), "max_contour_deviation": worst}, args.json, out)
    return EXIT_ROUTES if worst > CONTOUR_TOL else EXIT_OK


def cmd_elliptic(args, out) -> int:
    if args.grid:
        xs, ys = args.grid.split(",")
        out.write("tau_re,tau_im,logdet\n")
        for x, y, v in landscape_rows(parse_grid(xs), parse_grid(ys)):
            out.write(f"{x!r},{y!r},{v!r}\n")
        return EXIT_OK
    if args.stationary:
        sp = find_stationary_tau(_complex(args.stationary))
        _emit({
            "tau": sp.tau, "classification": sp.classification, "gradient_norm": sp.gradient_norm,
            "hessian_eigenvalues": list(sp.hessian_eigenvalues), "lambda": sp.lam, "log_det": sp.log_det,
        }, args.json, out)
        return EXIT_OK
    if args.tau:
        tau = _complex(args.tau)
        tol = args.tol if args.tol is not None else 1e-10
        r_eta, r_mod = det_lambda(tau, tol=tol)
        lam = lambda_of_tau(tau)
        routes = {"eta": math.log(r_eta), "modulus": math.log(r_mod)}
        if args.flat:
            routes["flat-cones"] = det_lambda_flat_oracle(lam)
        _emit({"tau": tau, "lambda": lam, "det": r_eta, "log_det": math.log(r_eta), "routes": _routes_block(routes)}, args.json, out)
        if args.flat and abs(routes["flat-cones"] - routes["eta"]) > 1e-4:
            return EXIT_ROUTES
        return EXIT_OK
    if args.lam:
        lam = _complex(args.lam)
        _emit({"lambda": lam, "log_det": det_lambda_flat_oracle(lam)}, args.json, out)
        return EXIT_OK
    raise DomainError("give one of --tau, --lambda, --stationary, --grid")


def cmd_stationarity(args, out) -> int:
    rep = check_platonic_stationarity(args.solid, args.ell, step=args.step, tol=args.tol, workers=args.workers)
    out.write(json.dumps(_jsonable(rep.as_dict()), indent=2) + "\n")
    return EXIT_OK if rep.passed else EXIT_ROUTES


def cmd_sweep(args, out) -> int:
    provider = _provider(args)
    tol = args.tol if args.tol is not None else PLATONIC_TOL
    grid = parse_grid(args.grid)
    out.write("beta,logdet_area4pi\n")
    skipped = []
    for beta in grid:
        try:
            res = platonic_log_det(args.solid, beta, provider, ell=args.ell, tol=tol, with_flat=False)
        except CurvedBaseUnavailable:
            skipped.append(beta)
            continue
        out.write(f"{beta!r},{res.log_det!r}\n")
    if skipped:
        sys.stderr.write(f"skipped {len(skipped)} grid points without base data (first beta={skipped[0]!r})\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="belyidet", description="Determinants of Laplacians on spheres glued from triangles.")
    p.add_argument("--tol", type=float, default=None, help="override the cross-route tolerance")
    p.add_argument("--json", action="store_true", help="JSON output")
    # the global options are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def map_args(q):
        g = q.add_mutually_exclusive_group(required=True)
        g.add_argument("--catalog", help="cyclic(l), dihedral(l), tetrahedral, octahedral, icosahedral")
        g.add_argument("--map", help="JSON map file or text")

    q = sub.add_parser("analyze", parents=[common], help="ramification data, A_f and C_f of a Belyi map")
    map_args(q)
    q.set_defaults(func=cmd_analyze)

    q = sub.add_parser("det-flat", parents=[common], help="flat metric with prescribed cones")
    q.add_argument("config", help="JSON configuration file or text")
    q.add_argument("--quadrature", action="store_true", help="also compute the area by 2D quadrature")
    q.set_defaults(func=cmd_det_flat)

    q = sub.add_parser("det-belyi", parents=[common], help="pullback of a three-point base through a Belyi map")
    map_args(q)
    q.add_argument("--triangle", required=True, help="beta0,beta1,betainf")
    q.add_argument("--base-table")
    q.add_argument("--area", type=float)
    q.add_argument("--liouville", action="store_true")
    q.set_defaults(func=cmd_det_belyi)

    q = sub.add_parser("det-family", parents=[common], help="closed form of one of the five families")
    q.add_argument("family", choices=["cyclic", "dihedral", "tetrahedral", "octahedral", "icosahedral"])
    q.add_argument("--ell", type=int)
    q.add_argument("--triangle", required=True)
    q.add_argument("--base-table")
    q.set_defaults(func=cmd_det_family)

    q = sub.add_parser("det-platonic", parents=[common], help="regular solid at area 4 pi")
    q.add_argument("solid", choices=["tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron", "dihedron"])
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--ell", type=int)
    q.add_argument("--base-table")
    q.set_defaults(func=cmd_det_platonic)

    q = sub.add_parser("accessory", parents=[common], help="accessory parameters of a pullback metric")
    map_args(q)
    q.add_argument("--triangle", required=True)
    q.add_argument("--no-contour", action="store_true")
    q.set_defaults(func=cmd_accessory)

    q = sub.add_parser("elliptic", parents=[common], help="four cones of order -1/2")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--tau", help="re,im")
    g.add_argument("--lambda", dest="lam", help="re,im")
    g.add_argument("--stationary", help="start point re,im")
    g.add_argument("--grid", help="re_start:re_stop:re_step,im_start:im_stop:im_step")
    q.add_argument("--flat", action="store_true", help="with --tau, add the flat-cone route")
    q.set_defaults(func=cmd_elliptic)

    q = sub.add_parser("stationarity", parents=[common], help="finite-difference criticality at a regular solid")
    q.add_argument("solid", choices=["tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron", "dihedron"])
    q.add_argument("--ell", type=int)
    q.add_argument("--step", type=float, default=1e-3)
    q.add_argument("--workers", type=int, default=None)
    q.set_defaults(func=cmd_stationarity)

    q = sub.add_parser("sweep", parents=[common], help="CSV of log det over a beta grid")
    q.add_argument("kind", choices=["platonic"])
    q.add_argument("solid", choices=["tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron", "dihedron"])
    q.add_argument("--grid", required=True, help="start:stop:step")
    q.add_argument("--ell", type=int)
    q.add_argument("--base-table")
    q.set_defaults(func=cmd_sweep)
    return p


_VALUE_OPTIONS = {"--triangle", "--grid", "--tau", "--lambda", "--stationary", "--beta", "--area", "--tol", "--step"}
_NEGATIVE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Turn "--grid -0.95:0:0.01" into "--grid=-0.95:0:0.01" so argparse does
    not mistake a negative list for an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except RouteDisagreement as exc:
        sys.stderr.write(f"route disagreement: {exc}\n")
        return EXIT_ROUTES
    except (DomainError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ArithmeticError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_ROUTES


def main() -> None:
    sys.exit(run())

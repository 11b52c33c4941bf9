"""Command line front end.

Subcommands:

  verify SPEC.json        residual channels as JSON, exit 1 when over tier
  classify SPEC.json      structure label as JSON, exit 1 for bad labels
  solve-ode ...           integrate the warping equation or hunt an orbit
  catalog list|build      reference entries, verified on build
  report SPEC.json OUT    per-grid-point CSV or JSON profile

Exit codes: 0 success, 1 residual or classification failure, 2 parse or
schema error, 3 I/O error.  Output is deterministic: sorted JSON keys and
fixed float formatting, no timestamps.

The STATICGEO_GRID environment variable overrides the default grid size
for specs that do not pin one; it is read here and nowhere else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import curvature_engine as ce
from . import static_verifier as sv
from .catalog import CATALOG_NAMES, EXPECTED_LABELS, build_entry
from .errors import BlowUp, StaticGeoError
from .ode_solver import WarpingODEParams, find_periodic, first_integral, integrate_warping
from .warped_geometry import DEFAULT_GRID_POINTS, load_problem, validate_spec

__all__ = ["main"]


def _default_grid() -> int:
    raw = os.environ.get("STATICGEO_GRID")
    if raw is None:
        return DEFAULT_GRID_POINTS
    try:
        grid = int(raw)
    except ValueError as exc:
        raise StaticGeoError(f"STATICGEO_GRID must be an integer, got {raw!r}") from exc
    if grid < 16:
        raise StaticGeoError(f"STATICGEO_GRID too small: {grid}")
    return grid


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return load_problem(doc, _default_grid())


def _cmd_verify(args) -> int:
    spec, lapse = _load(args.spec)
    bad = validate_spec(spec)
    if not bad.ok:
        _emit({"valid": False, "violations": bad.violations[:16]})
        return 1
    tier = sv.tier_for(spec, lapse)
    tol = args.tol if args.tol is not None else tier.residual
    report = sv.verify_pair(spec, lapse)
    ok = report.max_sup() <= tol
    _emit(
        {
            "channels": report.to_dict(),
            "max_sup": report.max_sup(),
            "tolerance": tol,
            "pass": ok,
        }
    )
    return 0 if ok else 1


def _cmd_classify(args) -> int:
    spec, lapse = _load(args.spec)
    label = sv.classify(spec, lapse)
    _emit({"label": label.label, "diagnostics": label.to_dict()})
    return 0 if label.label not in ("Invalid", "ViolatesThm42") else 1


def _cmd_solve_ode(args) -> int:
    params = WarpingODEParams(
        power=args.power,
        linear_coeff=args.linear_coeff,
        forcing=args.forcing,
        h0=args.h0,
        h0_prime=args.h0_prime,
        domain=(args.domain[0], args.domain[1]),
        step=args.step,
    )
    if args.periodic:
        if args.k is None:
            raise StaticGeoError("--periodic needs --k")
        sol = find_periodic(params, args.k)
        if sol is None:
            _emit({"periodic": False})
            return 1
        _emit(
            {
                "periodic": True,
                "period": sol.period,
                "h_min": sol.h_min,
                "h_max": sol.h_max,
                "k": sol.k,
            }
        )
        return 0
    try:
        warping = integrate_warping(params)
    except BlowUp as exc:
        _emit({"blow_up": True, "last_valid_s": exc.last_valid_s})
        return 1
    lo, hi = params.domain
    ends = np.array([lo, hi])
    h = warping.value(ends)
    hp = warping.derivative(ends, 1)
    k = first_integral(params, h, hp).value
    _emit(
        {
            "blow_up": False,
            "h_end": float(h[1]),
            "h_prime_end": float(hp[1]),
            "first_integral": float(k[0]),
            "first_integral_drift": float(abs(k[1] - k[0])),
        }
    )
    return 0


def _entry_with_grid(name: str, overrides: dict):
    entry = build_entry(name, **overrides)
    grid = _default_grid()
    if grid != entry.spec.grid_points:
        from dataclasses import replace

        entry = replace(entry, spec=replace(entry.spec, grid_points=grid))
    return entry


def _cmd_catalog(args) -> int:
    if args.action == "list":
        _emit(
            {
                "entries": [
                    {"name": name, "expected_label": EXPECTED_LABELS[name]}
                    for name in CATALOG_NAMES
                ]
            }
        )
        return 0
    overrides = {}
    for item in args.set or []:
        key, _, raw = item.partition("=")
        if not _:
            raise StaticGeoError(f"--set expects key=value, got {item!r}")
        try:
            overrides[key] = int(raw)
        except ValueError:
            overrides[key] = float(raw)
    entry = _entry_with_grid(args.name, overrides)
    report = sv.verify_pair(entry.spec, entry.lapse)
    label = sv.classify(entry.spec, entry.lapse)
    tier = sv.tier_for(entry.spec, entry.lapse)
    ok = label.label == entry.expected_label and report.max_sup() <= tier.residual
    out = {
        "name": entry.name,
        "n": entry.spec.n,
        "expected_label": entry.expected_label,
        "label": label.label,
        "max_sup": report.max_sup(),
        "tolerance": tier.residual,
        "compact": entry.compact,
        "period": entry.period,
        "pass": ok,
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(entry.to_problem_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        out["written"] = args.out
    _emit(out)
    return 0 if ok else 1


def _report_columns(spec, lapse):
    lo, hi = spec.domain
    s = np.linspace(lo + 2 * spec.step, hi - 2 * spec.step, spec.grid_points)
    B = len(spec.blocks)
    r = ce.ricci_spectrum(spec, s)
    xi = ce.xi_profile(spec, s)
    stat = sv.static_pointwise(spec, lapse, s)
    d = ce.d_tensor_classes(spec, lapse, s).value_block
    cols: list[tuple[str, np.ndarray]] = [("s", s)]
    for j, b in enumerate(spec.blocks):
        cols.append((f"h_{j}", np.broadcast_to(b.warping.value(s), s.shape)))
    for j in range(B):
        cols.append((f"xi_{j}", xi[j]))
    cols.append(("lambda1", r.lambda_1))
    for j in range(B):
        cols.append((f"lambda_{j}", r.lambda_block[j]))
    cols.append(("R", r.scalar))
    cols.append(("f", np.asarray(lapse.value(s), dtype=float)))
    cols.append(("static_11", stat["static_11"]))
    for j in range(B):
        cols.append((f"static_{j}", stat[f"static_block[{j}]"]))
    for j in range(B):
        cols.append((f"D_{j}", d[j]))
    return cols


def _cmd_report(args) -> int:
    spec, lapse = _load(args.spec)
    cols = _report_columns(spec, lapse)
    names = [name for name, _ in cols]
    data = np.column_stack([values for _, values in cols])
    if args.format == "csv":
        lines = [",".join(names)]
        for row in data:
            lines.append(",".join("%.17g" % v for v in row))
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        doc = {"columns": names, "rows": [[float(v) for v in row] for row in data]}
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True)
            fh.write("\n")
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="staticgeo",
        description="Verification toolkit for static warped-product geometries.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="residual report for a spec file")
    v.add_argument("spec")
    v.add_argument("--tol", type=float, default=None,
                   help="sup tolerance (default: tier by data source)")
    v.set_defaults(func=_cmd_verify)

    c = sub.add_parser("classify", help="structure label for a spec file")
    c.add_argument("spec")
    c.set_defaults(func=_cmd_classify)

    o = sub.add_parser("solve-ode", help="integrate the warping equation")
    o.add_argument("--power", type=int, required=True)
    o.add_argument("--linear-coeff", type=float, required=True)
    o.add_argument("--forcing", type=float, required=True)
    o.add_argument("--h0", type=float, default=1.0)
    o.add_argument("--h0-prime", type=float, default=0.0)
    o.add_argument("--domain", type=float, nargs=2, default=(0.0, 1.0))
    o.add_argument("--step", type=float, default=None)
    o.add_argument("--periodic", action="store_true",
                   help="search for a closed orbit instead of integrating")
    o.add_argument("--k", type=float, default=None,
                   help="conserved value for --periodic")
    o.set_defaults(func=_cmd_solve_ode)

    g = sub.add_parser("catalog", help="list or build reference entries")
    g.add_argument("action", choices=("list", "build"))
    g.add_argument("name", nargs="?", default=None)
    g.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="builder parameter override, repeatable")
    g.add_argument("--out", default=None,
                   help="also write the entry as a spec file")
    g.set_defaults(func=_cmd_catalog)

    r = sub.add_parser("report", help="per-grid-point profile to CSV or JSON")
    r.add_argument("spec")
    r.add_argument("out")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "catalog" and args.action == "build" and not args.name:
        print("catalog build needs an entry name", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except (json.JSONDecodeError, KeyError, TypeError, StaticGeoError, ValueError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

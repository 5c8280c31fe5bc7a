"""Command-line entry point: ``hyperfit {fit,props,predict,report,equilibrium,synth}``.

Exit codes: 0 success, 2 bad input, 3 fit failure, 4 drying series not
equilibrated.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from collections import OrderedDict
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from . import actuator, ingest, plotting, synthetic, tables
from .actuator import fmt
from .errors import DegenerateFitError, DomainError, NotEquilibratedError, ParseError
from .fitting import FitConfig, Stat, fit_yeoh, summarize_composition
from .yeoh import (
    DOGBONE,
    SpecimenGeometry,
    YeohParameters,
    derive_properties,
    uniaxial_loading,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FIT = 3
EXIT_NOT_EQUILIBRATED = 4


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


def _styled(text, code):
    if os.environ.get("HYPERFIT_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _warn(msg):
    print(_styled("warning:", "33") + " " + msg, file=sys.stderr)


def _read_bytes(path):
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _round6(x):
    return float(fmt(x))


def _write_text(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _safe_name(text):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_") or "item"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _props_dict(props):
    return {
        "youngs_modulus_MPa": _round6(props.youngs_modulus),
        "shear_modulus_MPa": _round6(props.shear_modulus),
        "tensile_strength_MPa": None if props.tensile_strength is None else _round6(props.tensile_strength),
        "elongation_at_break_pct": None if props.elongation_at_break is None else _round6(props.elongation_at_break),
        "poisson_ratio": props.poisson_ratio,
    }


# ---------------------------------------------------------------- fit

def cmd_fit(args):
    records = ingest.parse_tensile_csv(_read_bytes(args.input))
    config = FitConfig(tol=args.tol, max_iterations=args.max_iters,
                       weighted=args.weighted, method=args.method)
    out = Path(args.out)
    (out / "fits").mkdir(parents=True, exist_ok=True)

    records = sorted(records, key=lambda r: r.specimen_id)
    failures = []
    by_comp: OrderedDict[str, list] = OrderedDict()
    curve_rows, curves = [], []
    for rec in records:
        doc = {
            "specimen_id": rec.specimen_id,
            "composition": rec.composition_label,
            "geometry_mm": {"l0": rec.geometry.l0, "w0": rec.geometry.w0, "h0": rec.geometry.h0},
            "lambda_eab": _round6(rec.lambda_eab),
            "load_at_break_N": _round6(rec.load_at_break),
        }
        try:
            fr = fit_yeoh(rec, config)
        except DegenerateFitError as exc:
            failures.append(rec.specimen_id)
            doc["error"] = str(exc)
            _write_json(out / "fits" / f"{_safe_name(rec.specimen_id)}.json", doc)
            continue
        props = derive_properties(fr.params, rec.lambda_eab, rec.load_at_break, rec.geometry)
        doc.update({
            "params_MPa": {"c1": _round6(fr.params.c1), "c2": _round6(fr.params.c2),
                           "c3": _round6(fr.params.c3)},
            "residual_rms_N": _round6(fr.residual_rms),
            "per_point_residuals_N": [_round6(v) for v in fr.per_point_residuals],
            "converged": fr.converged,
            "iterations": fr.iterations,
            "properties": _props_dict(props),
        })
        _write_json(out / "fits" / f"{_safe_name(rec.specimen_id)}.json", doc)
        if not fr.converged:
            failures.append(rec.specimen_id)
        by_comp.setdefault(rec.composition_label, []).append((fr, props))
        pred = uniaxial_loading(fr.params, rec.geometry, rec.stretch)
        for lam, meas, p in zip(rec.stretch, rec.load, pred):
            curve_rows.append([rec.specimen_id, rec.composition_label, fmt(lam), fmt(meas), fmt(p)])
        curves.append((rec.specimen_id, rec.stretch, rec.load, pred))

    _write_text(out / "curves.csv", _csv_text(
        ["specimen_id", "composition", "lambda1", "load_measured_N", "load_predicted_N"], curve_rows))
    if curves:
        plotting.plot_fit_curves(curves, out / "curves.svg")

    summaries = []
    for comp, pairs in by_comp.items():
        if len(pairs) < 2:
            _warn(f"composition {comp!r} has a single specimen; no summary statistics")
            continue
        summaries.append(summarize_composition(pairs))
    if summaries:
        _write_text(out / "summary.csv", tables.summary_csv(summaries))
        _write_text(out / "constants.txt", tables.constants_table(summaries))
        _write_text(out / "properties.txt", tables.properties_table(
            [(s.composition_label, s) for s in summaries]))
        print(tables.constants_table(summaries), end="")

    for fr_list in by_comp.values():
        for fr, _ in fr_list:
            status = _styled("ok", "32") if fr.converged else _styled("NOT CONVERGED", "31")
            print(f"{fr.specimen_id}: C1={fmt(fr.params.c1)} C2={fmt(fr.params.c2)} "
                  f"C3={fmt(fr.params.c3)} MPa rms={fmt(fr.residual_rms)} N [{status}]")
    if failures:
        _warn("fit failed for: " + ", ".join(failures))
        return EXIT_FIT
    return EXIT_OK


# ---------------------------------------------------------------- props

def _entries_from_params(path):
    try:
        doc = json.loads(_read_bytes(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    items = doc if isinstance(doc, list) else [doc]
    entries = []
    for k, item in enumerate(items):
        if not isinstance(item, dict):
            raise InputError(f"{path}: entry {k} is not an object")
        src = item.get("params_MPa", item)
        try:
            params = YeohParameters(float(src["c1"]), float(src.get("c2", 0.0)),
                                    float(src.get("c3", 0.0)))
        except KeyError:
            raise InputError(f"{path}: entry {k} lacks c1") from None
        except (TypeError, ValueError) as exc:
            raise InputError(f"{path}: entry {k}: {exc}") from None
        g = item.get("geometry_mm")
        geom = DOGBONE if g is None else SpecimenGeometry(float(g["l0"]), float(g["w0"]), float(g["h0"]))
        entries.append({
            "id": str(item.get("specimen_id", f"entry{k + 1}")),
            "composition": str(item.get("composition", "")),
            "params": params,
            "lambda_eab": item.get("lambda_eab"),
            "load_at_break": item.get("load_at_break_N"),
            "geometry": geom,
        })
    return entries


def _entries_from_fit_dir(path):
    files = sorted(Path(path).glob("fits/*.json")) or sorted(Path(path).glob("*.json"))
    if not files:
        raise InputError(f"no fit results found under {path}")
    entries = []
    for f in files:
        doc = json.loads(f.read_text(encoding="utf-8"))
        if "params_MPa" not in doc:
            _warn(f"skipping failed fit {f.name}")
            continue
        entries.extend(_entries_from_params(f))
    if not entries:
        raise InputError(f"no successful fit results under {path}")
    return entries


def cmd_props(args):
    if bool(args.params) == bool(args.from_dir):
        raise InputError("give exactly one of --params or --from")
    entries = _entries_from_params(args.params) if args.params else _entries_from_fit_dir(args.from_dir)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    groups: OrderedDict[str, list] = OrderedDict()
    for e in sorted(entries, key=lambda e: (e["composition"], e["id"])):
        props = derive_properties(e["params"], e["lambda_eab"], e["load_at_break"], e["geometry"])
        groups.setdefault(e["composition"], []).append(props)
        rows.append([e["id"], e["composition"], fmt(e["params"].c1), fmt(props.shear_modulus),
                     fmt(props.youngs_modulus),
                     "" if props.tensile_strength is None else fmt(props.tensile_strength),
                     "" if props.elongation_at_break is None else fmt(props.elongation_at_break),
                     fmt(props.poisson_ratio)])
    _write_text(out / "properties.csv", _csv_text(
        ["id", "composition", "c1_MPa", "shear_modulus_MPa", "youngs_modulus_MPa",
         "tensile_strength_MPa", "elongation_at_break_pct", "poisson_ratio"], rows))

    columns = []
    for comp, plist in groups.items():
        columns.append((comp or "(unlabeled)", _aggregate(plist)))
    text = tables.properties_table(columns)
    _write_text(out / "properties.txt", text)
    print(text, end="")
    return EXIT_OK


def _aggregate(plist):
    agg = SimpleNamespace()
    for attr in ("youngs_modulus", "tensile_strength", "elongation_at_break"):
        vals = [getattr(p, attr) for p in plist]
        if any(v is None for v in vals):
            setattr(agg, attr, None)
        elif len(vals) == 1:
            setattr(agg, attr, vals[0])
        else:
            setattr(agg, attr, Stat(float(np.mean(vals)), float(np.std(vals, ddof=1))))
    return agg


# ---------------------------------------------------------------- predict

def cmd_predict(args):
    try:
        params = YeohParameters(args.c1, args.c2, args.c3)
        geom = SpecimenGeometry(args.l0, args.w0, args.h0)
    except DomainError as exc:
        raise InputError(str(exc)) from None
    if not (0 < args.lambda_min <= args.lambda_max):
        raise InputError("need 0 < lambda-min <= lambda-max")
    if args.points < 1:
        raise InputError("--points must be >= 1")
    if args.lambda_min == args.lambda_max:
        lam = np.array([args.lambda_min])
    else:
        lam = np.linspace(args.lambda_min, args.lambda_max, args.points)
    load = np.atleast_1d(uniaxial_loading(params, geom, lam))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [[fmt(a), fmt(b), "tension" if a >= 1 else "compression-extrapolated"]
            for a, b in zip(lam, load)]
    _write_text(out / "prediction.csv", _csv_text(["lambda1", "load_N", "regime"], rows))
    plotting.plot_prediction(lam, load, out / "prediction.svg",
                             label=f"C = ({fmt(params.c1)}, {fmt(params.c2)}, {fmt(params.c3)}) MPa")
    if lam[0] < 1:
        _warn("stretches below 1 are compression and lie outside the fitted tension data")
    print(f"F1({fmt(lam[-1])}) = {fmt(load[-1])} N over {len(lam)} points")
    return EXIT_OK


# ---------------------------------------------------------------- report

def cmd_report(args):
    if not args.sweep and not args.compare and not args.table3:
        raise InputError("nothing to report: give --sweep, --compare or --table3")
    out = Path(args.out)
    sweeps = []
    for path in args.sweep or []:
        data = ingest.parse_pressure_csv(_read_bytes(path))
        sweeps.append((Path(path).stem, actuator.PressureSweep(data.quantity, data.pressure_kpa, data.values)))
    rows = []
    if args.compare:
        try:
            rows = [actuator.ComparisonRow(*r) for r in ingest.parse_comparison_csv(_read_bytes(args.compare))]
        except DomainError as exc:
            raise ParseError(str(exc)) from None
    elif args.table3:
        rows = list(actuator.TABLE3_ROWS)
    if not args.step > 0:
        raise InputError("--step must be positive")
    out.mkdir(parents=True, exist_ok=True)

    lines = []
    for i, (stem, sw) in enumerate(sweeps, start=1):
        name = f"sweep{i}_{_safe_name(stem)}"
        p0, p1 = sw.pressure_kpa[0], sw.pressure_kpa[-1]
        n = int(round((p1 - p0) / args.step)) + 1
        grid = np.union1d(np.linspace(p0, p1, max(n, 2)), sw.pressure_kpa)
        dense = actuator.interpolate(sw, grid)
        in_env = (grid >= 0) & (grid <= actuator.TESTED_MAX_KPA)
        _write_text(out / f"{name}.csv", _csv_text(
            ["pressure_kPa", f"{sw.quantity}_{sw.unit}", "in_tested_range"],
            [[fmt(p), fmt(v), "yes" if ok else "no"] for p, v, ok in zip(grid, dense, in_env)]))
        label = actuator.QUANTITIES[sw.quantity][0]
        plotting.plot_sweep(sw, grid, dense, out / f"{name}.svg", title=f"{label}: {actuator.headline(sw)}")
        line = f"{label} ({stem}): {actuator.headline(sw)}"
        if not np.all(sw.in_envelope):
            line += f"  [includes samples outside 0-{fmt(actuator.TESTED_MAX_KPA)} kPa]"
        lines.append(line)

    text = "\n".join(lines) + ("\n" if lines else "")
    if rows:
        if text:
            text += "\n"
        text += actuator.comparison_report(rows)
        _write_text(out / "comparison.csv", actuator.comparison_csv(rows))
        if any(sw.quantity == "blocked_force" for _, sw in sweeps):
            text += ("\nNote: the blocked-force headline is the measured sweep value; "
                     "comparison entries are reproduced as given and may be rounded.\n")
    _write_text(out / "report.txt", text)
    print(text, end="")
    return EXIT_OK


# ---------------------------------------------------------------- equilibrium

def cmd_equilibrium(args):
    series = ingest.parse_mass_csv(_read_bytes(args.input))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    found, missing, rows = {}, [], []
    for s in series:
        try:
            t = ingest.detect_equilibrium(s, window=args.window, rel_tol=args.rel_tol)
        except NotEquilibratedError as exc:
            missing.append(str(exc))
            rows.append([s.composition_label, "", "no"])
            continue
        except DomainError as exc:
            raise InputError(str(exc)) from None
        found[s.composition_label] = t
        rows.append([s.composition_label, fmt(t), "yes"])
        print(f"{s.composition_label}: equilibrium at {fmt(t)} h")
    _write_text(out / "equilibrium.csv", _csv_text(["composition", "equilibrium_h", "equilibrated"], rows))
    plotting.plot_mass(series, found, out / "mass.svg")
    if missing:
        for msg in missing:
            print(_styled("not equilibrated:", "31") + " " + msg, file=sys.stderr)
        return EXIT_NOT_EQUILIBRATED
    return EXIT_OK


# ---------------------------------------------------------------- synth

def cmd_synth(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for k, (comp, params) in enumerate(synthetic.TABLE1_MEANS.items()):
        records += synthetic.synthetic_batch(params, comp, n_specimens=args.specimens,
                                             seed=args.seed + k, noise=args.noise, spread=args.spread,
                                             lambda_max=2.55, break_spread=0.03)
    _write_text(out / "tensile.csv", ingest.serialize_tensile_csv(records))
    mass_rows = []
    for comp, water in (("GEL/GLY 1:1", 10.0), ("GEL/GLY 1:2", 9.0)):
        t, m = synthetic.drying_curve(final_mass=11.0, water_mass=water)
        mass_rows += [[comp, fmt(a), fmt(b)] for a, b in zip(t, m)]
    _write_text(out / "mass.csv", "# units: time_h=h, mass_g=g\n"
                + _csv_text(["composition", "time_h", "mass_g"], mass_rows))
    print(f"wrote {out / 'tensile.csv'} and {out / 'mass.csv'}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="hyperfit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit Yeoh constants to tensile CSV data")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--weighted", action="store_true", help="relative residual weighting")
    p.add_argument("--method", choices=("linear", "lm"), default="linear")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("props", help="derive material properties from constants")
    p.add_argument("--params")
    p.add_argument("--from", dest="from_dir")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("predict", help="load-stretch curve for given constants")
    for name in ("c1", "c2", "c3"):
        p.add_argument(f"--{name}", type=float, required=name == "c1", default=0.0)
    p.add_argument("--l0", type=float, default=DOGBONE.l0)
    p.add_argument("--w0", type=float, default=DOGBONE.w0)
    p.add_argument("--h0", type=float, default=DOGBONE.h0)
    p.add_argument("--lambda-min", type=float, default=1.0)
    p.add_argument("--lambda-max", type=float, default=2.5)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", help="actuator sweep and comparison report")
    p.add_argument("--sweep", nargs="+")
    p.add_argument("--compare")
    p.add_argument("--table3", action="store_true", help="use the built-in blocked-force comparison rows")
    p.add_argument("--step", type=float, default=0.5, help="interpolation grid step, kPa")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("equilibrium", help="detect the drying plateau of mass series")
    p.add_argument("--input", required=True)
    p.add_argument("--window", type=float, default=12.0)
    p.add_argument("--rel-tol", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("synth", help="write synthetic tensile and drying fixtures")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--spread", type=float, default=0.1)
    p.add_argument("--specimens", type=int, default=5)
    p.set_defaults(func=cmd_synth)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

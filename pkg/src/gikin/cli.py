"""Command-line harness: sanity table, unit-sweep motions, benchmarks.

A JSON config file (--config) can preset any flag by its long name with
dashes replaced by underscores; explicit flags win. Exit code 0 on a
completed run, 2 on configuration errors.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from gikin.catalog import ROBOT_NAMES, load_robot, random_motions
from gikin.experiments import (
    UNITS,
    PATH_IDENTITY_TOL_M,
    format_benchmark,
    format_sanity,
    paths_identical,
    run_benchmark,
    run_motion_units,
    sanity_table,
    unit_conversion,
    write_benchmark_csv,
    write_benchmark_json,
)
from gikin.kinematics import UNIT_IN_METERS
from gikin.solver import INVERSE_METHODS, JACOBIAN_TYPES, IKConfig
from gikin.svg import trajectory_svg


def _csv_list(value):
    return tuple(v.strip() for v in value.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gikin",
        description="generalized-inverse kinematics experiments",
    )
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file presetting any flag (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sanity", help="Jacobian + all inverse methods across units")
    p.add_argument("--robot", default="planar3", choices=ROBOT_NAMES)
    p.add_argument("--theta1-deg", type=float, default=30.0)
    p.add_argument("--theta2-deg", type=float, default=30.0)
    p.add_argument("--d3-m", type=float, default=-0.7)
    p.add_argument("--units", type=_csv_list, default=UNITS)
    p.add_argument("--out", type=Path, default=None, help="directory for CSV/JSON output")

    p = sub.add_parser("motion", help="solve one motion under several units and alphas")
    p.add_argument("--robot", required=True, choices=ROBOT_NAMES)
    p.add_argument("--method", default="MX", choices=INVERSE_METHODS)
    p.add_argument("--jacobian", default="geometric", choices=JACOBIAN_TYPES)
    p.add_argument("--alpha", type=_csv_list, default=("1.0",),
                   help="comma-separated attenuation values")
    p.add_argument("--units", type=_csv_list, default=UNITS)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--index", type=int, default=0,
                   help="which motion of the seeded list to run")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--tol-pos-mm", type=float, default=1.0)
    p.add_argument("--tol-ori-deg", type=float, default=1.0)
    p.add_argument("--out", type=Path, default=Path("motion-out"))

    p = sub.add_parser("benchmark", help="random-motion benchmark with unit sweep")
    p.add_argument("--robot", required=True, choices=ROBOT_NAMES)
    p.add_argument("--methods", "--method", type=_csv_list, default=("MP", "UC", "MX"))
    p.add_argument("--jacobians", "--jacobian", type=_csv_list, default=("geometric",))
    p.add_argument("--units", type=_csv_list, default=UNITS)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--tol-pos-mm", type=float, default=1.0)
    p.add_argument("--tol-ori-deg", type=float, default=1.0)
    p.add_argument("--out", type=Path, default=None)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path, default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config is not None:
        try:
            presets = json.loads(Path(known.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {known.config}: {exc}")
        for sp in parser._subparsers._group_actions[0].choices.values():
            usable = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in presets.items() if k in usable})
    return parser.parse_args(argv)


def cmd_sanity(args) -> int:
    report = sanity_table(
        robot=args.robot,
        joints_mm=(np.deg2rad(args.theta1_deg), np.deg2rad(args.theta2_deg),
                   args.d3_m * unit_conversion("m", "mm")),
        units=args.units,
    )
    print(format_sanity(report, args.units))
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        payload = {
            "robot": report.robot,
            "units": list(args.units),
            "jacobian": {u: report.jacobians[u].tolist() for u in args.units},
            "inverses": {m: {u: report.inverses[m][u].tolist() for u in args.units}
                         for m in report.inverses},
            "unit_consistent": report.consistent,
        }
        (args.out / "sanity.json").write_text(json.dumps(payload, indent=2))
        with open(args.out / "sanity.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "unit", "row", "values..."])
            for m in report.inverses:
                for u in args.units:
                    for r, row in enumerate(report.inverses[m][u]):
                        writer.writerow([m, u, r] + [f"{v:.8f}" for v in row])
    return 0


def cmd_motion(args) -> int:
    model = load_robot(args.robot)
    motion = random_motions(model, args.index + 1, args.seed)[args.index]
    args.out.mkdir(parents=True, exist_ok=True)
    planar = not model.has_orientation_rows()
    summary = {"robot": args.robot, "method": args.method, "jacobian": args.jacobian,
               "seed": args.seed, "index": args.index, "runs": [], "identical_paths": {}}
    overlays = {u: {} for u in args.units}
    for alpha_s in args.alpha:
        alpha = float(alpha_s)
        cfg = IKConfig(jacobian_type=args.jacobian, inverse_method=args.method,
                       alpha=alpha, max_iterations=args.max_iter,
                       position_tolerance=args.tol_pos_mm,
                       orientation_tolerance=np.deg2rad(args.tol_ori_deg))
        results = run_motion_units(model, motion, cfg, args.units)
        same, deviation = paths_identical(results, args.units)
        summary["identical_paths"][alpha_s] = {
            "identical": bool(same),
            "max_deviation_m": None if not np.isfinite(deviation) else deviation,
            "tolerance_m": PATH_IDENTITY_TOL_M,
        }
        for u in args.units:
            r = results[u]
            name = f"traj_{args.robot}_{args.method}_{u}_alpha{alpha_s}.csv"
            _write_trajectory_csv(args.out / name, r, u)
            overlays[u][f"alpha={alpha_s}"] = r.positions()
            summary["runs"].append({
                "unit": u, "alpha": alpha, "status": r.status,
                "iterations": r.iterations,
                "final_position_error": r.final_position_error,
                "final_orientation_error": r.final_orientation_error,
            })
    for u in args.units:
        svg = trajectory_svg(overlays[u], f"{args.robot} {args.method} [{u}]", planar=planar)
        (args.out / f"traj_{args.robot}_{args.method}_{u}.svg").write_text(svg)
    (args.out / "summary.json").write_text(json.dumps(summary, indent=2))
    print(json.dumps(summary["identical_paths"], indent=2))
    return 0


def _write_trajectory_csv(path, result, unit) -> None:
    to_m = UNIT_IN_METERS[unit]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "X", "Y", "Z", "Ro", "Pi", "Ya",
                         "X_m", "Y_m", "Z_m"])
        for i, pose in enumerate(result.trajectory):
            v = pose.as_vector()
            writer.writerow(
                [i] + [f"{x:.10g}" for x in v]
                + [f"{x * to_m:.10g}" for x in v[:3]]
            )


def cmd_benchmark(args) -> int:
    report = run_benchmark(
        robot=args.robot, count=args.count, seed=args.seed,
        methods=args.methods, jacobians=args.jacobians, units=args.units,
        max_iterations=args.max_iter, tol_pos_mm=args.tol_pos_mm,
        tol_ori_deg=args.tol_ori_deg, alpha=args.alpha,
    )
    print(format_benchmark(report))
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        stem = f"benchmark_{args.robot}_seed{args.seed}"
        write_benchmark_csv(report, args.out / f"{stem}.csv")
        write_benchmark_json(report, args.out / f"{stem}.json")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = _apply_config(parser, sys.argv[1:] if argv is None else argv)
    for name in ("methods", "jacobians"):
        values = getattr(args, name, None)
        if values:
            pool = INVERSE_METHODS if name == "methods" else JACOBIAN_TYPES
            bad = [v for v in values if v not in pool]
            if bad:
                parser.error(f"unknown {name}: {', '.join(bad)}")
    if getattr(args, "units", None):
        bad = [u for u in args.units if u not in UNIT_IN_METERS]
        if bad:
            parser.error(f"unknown units: {', '.join(bad)}")
    handler = {"sanity": cmd_sanity, "motion": cmd_motion, "benchmark": cmd_benchmark}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())

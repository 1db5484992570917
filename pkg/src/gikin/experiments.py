"""Experiment protocols: sanity table, unit-sweep motions, benchmarks.

Everything here is deterministic given (seed, configuration) except the
informational wall-time column. Motions are generated once per
(robot, count, seed) and shared across methods, Jacobian types and units.

Path identity across units: two runs count as the same path when their
convergence status matches, trajectories (padded at the end with their
final pose to a common length) agree pointwise within
PATH_IDENTITY_TOL_M after converting positions to meters. A full-status
mismatch or a pointwise deviation beyond the tolerance marks the motion
as unit-sensitive. Unsolved motions participate: two runs that fail
identically in every unit are still the same path.
"""

import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np

from gikin import baselines
from gikin.catalog import MotionSpec, load_robot, random_motions
from gikin.kinematics import (
    POSITION_COMPONENTS,
    PRISMATIC,
    UNIT_IN_METERS,
    RobotModel,
    forward_kinematics,
    geometric_jacobian,
    rescale_units,
)
from gikin.linalg import mp_inverse, mx_inverse, uc_inverse
from gikin.partition import dynamic_partition, static_partition
from gikin.solver import IKConfig, solve

UNITS = ("m", "dm", "cm", "mm")
PATH_IDENTITY_TOL_M = 1e-4

SANITY_METHODS = ("MP", "ED", "JF", "JD", "SD", "IED", "SVF", "UC", "MX")
CONSISTENCY_RTOL = 1e-6


def unit_conversion(from_unit: str, to_unit: str) -> float:
    """Multiplier taking lengths in from_unit to to_unit."""
    return UNIT_IN_METERS[from_unit] / UNIT_IN_METERS[to_unit]


# ---------------------------------------------------------------------------
# sanity table


@dataclass(frozen=True)
class SanityReport:
    robot: str
    joints_mm: np.ndarray
    jacobians: dict            # unit -> ndarray
    inverses: dict             # method -> {unit -> ndarray}
    consistent: dict           # method -> bool


def _sanity_inverse(method, J, model, q, params: baselines.BaselineParams):
    m = J.shape[0]
    if method == "MP":
        return mp_inverse(J)
    if method == "UC":
        return uc_inverse(J)
    if method == "MX":
        return mx_inverse(J, dynamic_partition(model, q).partition)
    if method == "JD":
        return baselines.damped_jacobian(J, params)
    if method == "JF":
        return baselines.filtered_jacobian(J, params)
    if method == "SVF":
        return baselines.svf_inverse(J, params)
    if method == "ED":
        return baselines.error_damped(J, 1.0)
    if method == "IED":
        e = np.ones(m) / np.sqrt(m)
        return baselines.improved_error_damped(J, e, params.ied_bias)
    # SD returns updates, not a matrix: build its response to unit basis errors
    cols = [baselines.selectively_damped(J, basis, params.sd_gamma_max)
            for basis in np.eye(m)]
    return np.column_stack(cols)


def _unit_scales(model: RobotModel, to_unit: str):
    """(task-component scales, joint scales) induced by a unit change."""
    c = unit_conversion("m", to_unit)
    task = np.array([c if comp in POSITION_COMPONENTS else 1.0
                     for comp in model.task_components])
    joint = np.array([c if r.kind == PRISMATIC else 1.0 for r in model.rows])
    return task, joint


def sanity_table(robot: str = "planar3",
                 joints_mm=(np.deg2rad(30.0), np.deg2rad(30.0), -700.0),
                 units=UNITS,
                 params: baselines.BaselineParams = baselines.BaselineParams()) -> SanityReport:
    """Jacobian and all nine inverse methods across the unit sweep.

    A method is flagged unit-consistent when its inverse at every unit u
    matches diag(cols) inv_m diag(1/rows) within 1e-6 relative, i.e. when
    changing units merely rescales the result.
    """
    base = load_robot(robot)
    q_mm = base.check_joints(np.asarray(joints_mm, dtype=float))
    jacobians = {}
    inverses = {m: {} for m in SANITY_METHODS}
    models = {}
    for u in units:
        model_u, q_u = rescale_units(base, q_mm, u)
        models[u] = (model_u, q_u)
        J = geometric_jacobian(model_u, q_u).matrix
        jacobians[u] = J
        for method in SANITY_METHODS:
            inverses[method][u] = _sanity_inverse(method, J, model_u, q_u, params)
    consistent = {}
    ref_unit = units[0]
    ref_model, _ = models[ref_unit]
    for method in SANITY_METHODS:
        ok = True
        inv_ref = inverses[method][ref_unit]
        task_ref, joint_ref = _unit_scales(ref_model, ref_unit)
        for u in units:
            task_u, joint_u = _unit_scales(ref_model, u)
            task = task_u / task_ref
            joint = joint_u / joint_ref
            # a consistent inverse rescales: rows follow the joints,
            # columns compensate the task components
            predicted = (joint[:, None] * inv_ref) / task[None, :]
            actual = inverses[method][u]
            scale = max(1.0, float(np.max(np.abs(predicted))))
            if np.max(np.abs(actual - predicted)) > CONSISTENCY_RTOL * scale:
                ok = False
                break
        consistent[method] = ok
    return SanityReport(robot=robot, joints_mm=q_mm, jacobians=jacobians,
                        inverses=inverses, consistent=consistent)


def format_sanity(report: SanityReport, units=UNITS) -> str:
    out = [f"robot {report.robot}, geometric Jacobian and inverses (8 decimals)"]
    for u in units:
        out.append(f"\n== unit {u}\nJ_G =\n{_fmt(report.jacobians[u])}")
        for method in SANITY_METHODS:
            out.append(f"{method} =\n{_fmt(report.inverses[method][u])}")
    out.append("\nunit-consistent methods: "
               + ", ".join(m for m in SANITY_METHODS if report.consistent[m]))
    out.append("unit-sensitive methods:  "
               + ", ".join(m for m in SANITY_METHODS if not report.consistent[m]))
    return "\n".join(out)


def _fmt(M) -> str:
    return "\n".join("  " + "  ".join(f"{v: .8f}" for v in row) for row in np.atleast_2d(M))


# ---------------------------------------------------------------------------
# unit-sweep runs


def run_motion_units(model_mm: RobotModel, motion: MotionSpec, cfg: IKConfig,
                     units=UNITS) -> dict:
    """Solve one motion under every unit; returns unit -> IKResult.

    cfg.position_tolerance is read in millimeters (the catalog's native
    unit) and converted into each run's unit.
    """
    results = {}
    for u in units:
        model_u, q0_u = rescale_units(model_mm, motion.q0, u)
        _, qt_u = rescale_units(model_mm, motion.target_joints, u)
        target = forward_kinematics(model_u, qt_u)
        tol_u = cfg.position_tolerance * unit_conversion("mm", u)
        cfg_u = IKConfig(
            jacobian_type=cfg.jacobian_type,
            inverse_method=cfg.inverse_method,
            alpha=cfg.alpha,
            max_iterations=cfg.max_iterations,
            position_tolerance=tol_u,
            orientation_tolerance=cfg.orientation_tolerance,
            numerical_step=cfg.numerical_step,
            baseline_params=cfg.baseline_params,
            divergence_factor=cfg.divergence_factor,
        )
        results[u] = solve(model_u, q0_u, target, cfg_u)
    return results


def paths_identical(results: dict, units=UNITS, tol_m: float = PATH_IDENTITY_TOL_M):
    """(identical?, max deviation in meters) across the unit sweep."""
    statuses = {results[u].status for u in units}
    if len(statuses) != 1:
        return False, float("inf")
    paths = []
    longest = max(len(results[u].trajectory) for u in units)
    for u in units:
        P = results[u].positions() * UNIT_IN_METERS[u]
        if len(P) < longest:
            P = np.vstack([P, np.repeat(P[-1:], longest - len(P), axis=0)])
        paths.append(P)
    deviation = 0.0
    for P in paths[1:]:
        deviation = max(deviation, float(np.max(np.abs(P - paths[0]))))
    return deviation <= tol_m, deviation


# ---------------------------------------------------------------------------
# benchmark


@dataclass
class BenchmarkCell:
    solved: int = 0
    iterations: list = field(default_factory=list)
    position_errors_mm: list = field(default_factory=list)
    orientation_errors_deg: list = field(default_factory=list)
    wall_times_ms: list = field(default_factory=list)

    def stats(self, count: int) -> dict:
        def mean(xs):
            return float(np.mean(xs)) if xs else float("nan")
        return {
            "solved_percent": 100.0 * self.solved / count,
            "mean_iterations": mean(self.iterations),
            "mean_position_error_mm": mean(self.position_errors_mm),
            "mean_orientation_error_deg": mean(self.orientation_errors_deg),
            "mean_wall_time_ms": mean(self.wall_times_ms),
        }


@dataclass(frozen=True)
class BenchmarkReport:
    robot: str
    count: int
    seed: int
    units: tuple
    methods: tuple
    jacobians: tuple
    cells: dict                 # (method, jacobian, unit) -> stats dict
    identical_paths_percent: dict   # (method, jacobian) -> float
    partition: dict = field(default_factory=dict)   # audit record of the MX blocks

    def to_json_dict(self) -> dict:
        return {
            "robot": self.robot,
            "count": self.count,
            "seed": self.seed,
            "units": list(self.units),
            "methods": list(self.methods),
            "jacobians": list(self.jacobians),
            "partition": self.partition,
            "cells": [
                {"method": m, "jacobian": j, "unit": u, **stats}
                for (m, j, u), stats in sorted(self.cells.items())
            ],
            "identical_paths_percent": [
                {"method": m, "jacobian": j, "percent": p}
                for (m, j), p in sorted(self.identical_paths_percent.items())
            ],
        }


def run_benchmark(robot: str, count: int, seed: int,
                  methods=("MP", "UC", "MX"), jacobians=("geometric",),
                  units=UNITS, max_iterations: int = 500,
                  tol_pos_mm: float = 1.0, tol_ori_deg: float = 1.0,
                  alpha: float = 1.0,
                  params: baselines.BaselineParams = baselines.BaselineParams(),
                  progress=None) -> BenchmarkReport:
    """Count motions x methods x jacobians x units; per-cell statistics.

    Mean errors and iterations are computed over solved runs only. The
    identical-paths percentage counts motions whose trajectories agree
    across all units (see paths_identical), solved or not.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    model_mm = load_robot(robot)
    motions = random_motions(model_mm, count, seed)
    cells = {(m, j, u): BenchmarkCell() for m in methods for j in jacobians for u in units}
    ips = {(m, j): 0 for m in methods for j in jacobians}
    for method in methods:
        for jac in jacobians:
            cfg = IKConfig(
                jacobian_type=jac, inverse_method=method, alpha=alpha,
                max_iterations=max_iterations, position_tolerance=tol_pos_mm,
                orientation_tolerance=np.deg2rad(tol_ori_deg), baseline_params=params,
            )
            for motion in motions:
                t0 = time.perf_counter()
                try:
                    results = run_motion_units(model_mm, motion, cfg, units)
                except Exception:
                    continue    # per-run failure counts against %Sol everywhere
                elapsed_ms = 1000.0 * (time.perf_counter() - t0) / len(units)
                for u in units:
                    r = results[u]
                    cell = cells[(method, jac, u)]
                    if r.converged:
                        cell.solved += 1
                        cell.iterations.append(r.iterations)
                        cell.position_errors_mm.append(
                            r.final_position_error * unit_conversion(u, "mm"))
                        cell.orientation_errors_deg.append(
                            float(np.rad2deg(r.final_orientation_error)))
                        cell.wall_times_ms.append(elapsed_ms)
                same, _ = paths_identical(results, units)
                if same:
                    ips[(method, jac)] += 1
                if progress is not None:
                    progress(method, jac, motion.index)
    decision = static_partition(model_mm)
    return BenchmarkReport(
        robot=robot, count=count, seed=seed, units=tuple(units),
        methods=tuple(methods), jacobians=tuple(jacobians),
        cells={k: c.stats(count) for k, c in cells.items()},
        identical_paths_percent={k: 100.0 * v / count for k, v in ips.items()},
        partition={
            "reduced_form": decision.reduced_form,
            "w_rows": list(decision.partition.w_rows),
            "w_cols": list(decision.partition.w_cols),
            "axis_report": {str(k): v for k, v in decision.axis_report.items()},
        },
    )


BENCHMARK_CSV_COLUMNS = (
    "robot", "method", "jacobian", "unit", "solved_percent", "mean_iterations",
    "mean_position_error_mm", "mean_orientation_error_deg", "mean_wall_time_ms",
    "identical_paths_percent",
)


def write_benchmark_csv(report: BenchmarkReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCHMARK_CSV_COLUMNS)
        for (m, j, u), stats in sorted(report.cells.items()):
            writer.writerow([
                report.robot, m, j, u,
                f"{stats['solved_percent']:.1f}",
                f"{stats['mean_iterations']:.1f}",
                f"{stats['mean_position_error_mm']:.4f}",
                f"{stats['mean_orientation_error_deg']:.4f}",
                f"{stats['mean_wall_time_ms']:.2f}",
                f"{report.identical_paths_percent[(m, j)]:.1f}",
            ])


def write_benchmark_json(report: BenchmarkReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)


def format_benchmark(report: BenchmarkReport) -> str:
    lines = [f"robot {report.robot}: {report.count} motions, seed {report.seed}"]
    header = f"{'method':7s}{'jacobian':11s}" + "".join(
        f"{u + ' %Sol':>9s}{'iter':>6s}" for u in report.units) + f"{'%IPs':>7s}"
    lines.append(header)
    for m in report.methods:
        for j in report.jacobians:
            row = f"{m:7s}{j:11s}"
            for u in report.units:
                s = report.cells[(m, j, u)]
                it = s["mean_iterations"]
                row += f"{s['solved_percent']:9.1f}{it:6.1f}"
            row += f"{report.identical_paths_percent[(m, j)]:7.1f}"
            lines.append(row)
    return "\n".join(lines)

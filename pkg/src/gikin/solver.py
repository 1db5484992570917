"""Iterative Jacobian-based inverse-kinematics solver.

The loop is the classic one: at each step invert the current Jacobian
with the configured method and apply

    Q_{t+1} = Q_t + Jinv * alpha * (D_final - D_t)

with orientation components of the error angle-wrapped. The mixed inverse
re-derives its block partition from the current joint axes every
iteration.

Orientation error pairing: the geometric Jacobian's orientation rows are
angular velocities, so for it the orientation part of the error is
expressed as the rotation vector of R_target R_current^T (the same
quantity to first order, but valid globally). The numerical and
analytical Jacobians differentiate the RPY pose map and therefore consume
the wrapped RPY difference directly.
"""

from dataclasses import dataclass, field

import numpy as np

from gikin import baselines
from gikin._backend import kernels
from gikin.kinematics import (
    POSITION_COMPONENTS,
    PRISMATIC,
    UNIT_IN_METERS,
    Pose,
    RobotModel,
    analytical_jacobian,
    geometric_jacobian,
    intermediate_frames,
    numerical_jacobian,
    rotation_from_rpy,
    wrap_angle,
)
from gikin.linalg import mp_inverse, mx_inverse, uc_inverse
from gikin.partition import dynamic_partition

JACOBIAN_TYPES = ("geometric", "numerical", "analytical")
INVERSE_METHODS = ("MP", "UC", "MX", "ED", "JF", "JD", "SD", "IED", "SVF")

CONVERGED = "converged"
MAX_ITERATIONS = "max_iterations"
STALLED = "stalled"
DIVERGED = "diverged"

# prismatic trust-region cap, expressed in meters and scaled to the
# model's unit (active only when the model declares a revolute step cap)
PRISMATIC_STEP_CAP_M = 0.5
STALL_IMPROVEMENT = 2.0
DIVERGENCE_FACTOR = 1e6


class SolverError(RuntimeError):
    """An inverse method failed hard at some iteration."""

    def __init__(self, iteration: int, cause: Exception):
        super().__init__(f"inverse method failed at iteration {iteration}: {cause}")
        self.iteration = iteration
        self.cause = cause


@dataclass(frozen=True)
class IKConfig:
    jacobian_type: str = "geometric"
    inverse_method: str = "MX"
    alpha: float = 1.0
    max_iterations: int = 500
    position_tolerance: float = 1.0        # model length units
    orientation_tolerance: float = np.deg2rad(1.0)
    numerical_step: float = 0.01
    baseline_params: baselines.BaselineParams = field(default_factory=baselines.BaselineParams)
    divergence_factor: float = DIVERGENCE_FACTOR

    def __post_init__(self):
        if self.jacobian_type not in JACOBIAN_TYPES:
            raise ValueError(f"unknown jacobian type {self.jacobian_type!r}")
        if self.inverse_method not in INVERSE_METHODS:
            raise ValueError(f"unknown inverse method {self.inverse_method!r}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must lie in (0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.position_tolerance <= 0 or self.orientation_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class IKResult:
    converged: bool
    status: str
    iterations: int
    final_joints: np.ndarray
    trajectory: list            # one Pose per iterate, starting at D_{t0}
    final_position_error: float
    final_orientation_error: float

    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.trajectory])


def pose_error(current: Pose, target: Pose):
    """(position error, orientation error) between two poses.

    Euclidean norm of the position difference and of the wrapped RPY
    differences; a full turn in any orientation component is no error.
    """
    dp = np.linalg.norm(target.position - current.position)
    do = np.linalg.norm(wrap_angle(target.orientation - current.orientation))
    return float(dp), float(do)


def _task_errors(model: RobotModel, err6):
    pos = [i for i, c in enumerate(model.task_components) if c in POSITION_COMPONENTS]
    ori = [i for i, c in enumerate(model.task_components) if c not in POSITION_COMPONENTS]
    task = err6[model.task_indices()]
    ep = float(np.linalg.norm(task[pos])) if pos else 0.0
    eo = float(np.linalg.norm(task[ori])) if ori else 0.0
    return ep, eo


def _jacobian(model, q, cfg, frames):
    if cfg.jacobian_type == "geometric":
        return geometric_jacobian(model, q, frames=frames)
    if cfg.jacobian_type == "numerical":
        return numerical_jacobian(model, q, step=cfg.numerical_step)
    return analytical_jacobian(model, q)


def _apply_inverse(method, J, e, model, q, cfg):
    """Joint update for one iteration (the error is already attenuated)."""
    p = cfg.baseline_params
    if method == "MP":
        return mp_inverse(J) @ e
    if method == "UC":
        return uc_inverse(J) @ e
    if method == "MX":
        decision = dynamic_partition(model, q)
        return mx_inverse(J, decision.partition) @ e
    if method == "JD":
        return baselines.damped_jacobian(J, p) @ e
    if method == "ED":
        return baselines.error_damped(J, float(np.linalg.norm(e))) @ e
    if method == "IED":
        return baselines.improved_error_damped(J, e, p.ied_bias) @ e
    if method == "JF":
        return baselines.filtered_jacobian(J, p) @ e
    if method == "SVF":
        return baselines.svf_inverse(J, p) @ e
    return baselines.selectively_damped(J, e, p.sd_gamma_max)   # SD


def _cap_step(model: RobotModel, dq):
    cap = model.step_cap_rad
    if cap is None:
        return dq
    cap_len = PRISMATIC_STEP_CAP_M / UNIT_IN_METERS[model.length_unit]
    factor = 1.0
    for i, row in enumerate(model.rows):
        limit = cap_len if row.kind == PRISMATIC else cap
        mag = abs(dq[i])
        if mag > limit:
            factor = min(factor, limit / mag)
    return dq * factor


def solve(model: RobotModel, q0, d_final: Pose, cfg: IKConfig = IKConfig()) -> IKResult:
    """Run the iterative IK loop until both error norms meet the tolerances.

    The per-robot safeguards from the model file apply: a per-joint step
    cap (trust region) and a stall window that gives up when the best
    error has not halved within the window. On top of that a divergence
    guard aborts once the error exceeds divergence_factor times its
    initial value.
    """
    q = model.check_joints(q0).copy()
    frames = intermediate_frames(model, q)
    pose = _pose_from_frames(frames)
    trajectory = [pose]
    target_vec = d_final.as_vector()
    has_ori = model.has_orientation_rows()
    R_target = rotation_from_rpy(*d_final.orientation) if has_ori else None

    best_ep = best_eo = np.inf
    best_history = []
    initial_scale = None
    iterations = 0
    status = MAX_ITERATIONS
    ep = eo = np.inf
    # improvements far below the convergence scale carry no information and
    # would keep the stall guard alive on floating-point noise; track the
    # running best no lower than a fraction of each tolerance
    ep_floor = cfg.position_tolerance * 1e-3
    eo_floor = cfg.orientation_tolerance * 1e-3

    for it in range(cfg.max_iterations + 1):
        err6 = target_vec - pose.as_vector()
        err6[3:] = wrap_angle(err6[3:])
        ep, eo = _task_errors(model, err6)
        best_ep = max(min(best_ep, ep), ep_floor)
        best_eo = max(min(best_eo, eo), eo_floor)
        best_history.append((best_ep, best_eo))
        if initial_scale is None:
            # floored at the tolerance: a run starting with a tiny position
            # error but a large orientation error must be allowed to move
            initial_scale = max(ep, cfg.position_tolerance)
        iterations = it
        if ep <= cfg.position_tolerance and (not has_ori or eo <= cfg.orientation_tolerance):
            status = CONVERGED
            break
        if it == cfg.max_iterations:
            status = MAX_ITERATIONS
            break
        if ep > cfg.divergence_factor * initial_scale:
            status = DIVERGED
            break
        window = model.stall_window
        if window is not None and it >= window:
            ep0, eo0 = best_history[it - window]
            improved = best_ep * STALL_IMPROVEMENT <= ep0
            if has_ori:
                improved = improved or best_eo * STALL_IMPROVEMENT <= eo0
            if not improved:
                status = STALLED
                break

        J = _jacobian(model, q, cfg, frames).matrix
        e6 = err6.copy()
        if has_ori and cfg.jacobian_type == "geometric":
            R_current = frames[-1][:3, :3]
            e6[3:] = kernels.rotation_vector(R_target @ R_current.T)
        e = e6[model.task_indices()]
        try:
            dq = _apply_inverse(cfg.inverse_method, J, cfg.alpha * e, model, q, cfg)
        except (np.linalg.LinAlgError, RuntimeError) as exc:
            raise SolverError(it, exc) from exc
        q = q + _cap_step(model, dq)
        frames = intermediate_frames(model, q)
        pose = _pose_from_frames(frames)
        trajectory.append(pose)

    return IKResult(
        converged=(status == CONVERGED),
        status=status,
        iterations=iterations,
        final_joints=q,
        trajectory=trajectory,
        final_position_error=ep,
        final_orientation_error=eo,
    )


def _pose_from_frames(frames) -> Pose:
    T = frames[-1]
    return Pose(position=T[:3, 3].copy(),
                orientation=kernels.rpy_from_matrix(T[:3, :3]))

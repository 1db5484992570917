"""Denavit-Hartenberg chain modeling, forward kinematics and Jacobians.

Conventions (the classic/distal D-H form, matching the column order
theta, d, a, alpha of the robot tables):

    T_i = RotZ(theta_i) TransZ(d_i) TransX(a_i) RotX(alpha_i)

Orientation is reported as roll-pitch-yaw with R = Rz(yaw) Ry(pitch)
Rx(roll), pitch in [-pi/2, pi/2]. Angles are serialized in degrees and
held in radians internally; d/a constants and prismatic joint values are
in the model's length unit.
"""

from dataclasses import dataclass, replace

import numpy as np

from gikin._backend import kernels

TASK_COMPONENTS = ("X", "Y", "Z", "Ro", "Pi", "Ya")
POSITION_COMPONENTS = ("X", "Y", "Z")
UNIT_IN_METERS = {"m": 1.0, "dm": 0.1, "cm": 0.01, "mm": 0.001}

REVOLUTE = "R"
PRISMATIC = "P"

MODEL_FORMAT_HEADER = "gikin-robot v1"


class OrientationSingularError(RuntimeError):
    """Analytical Jacobian requested at (or too near) gimbal lock."""


def wrap_angle(x):
    """Wrap angles into [-pi, pi) (the boundary maps pi to -pi)."""
    return (np.asarray(x) + np.pi) % (2.0 * np.pi) - np.pi


def rotation_from_rpy(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Rotation matrix Rz(yaw) Ry(pitch) Rx(roll)."""
    cr, sr = np.cos(roll), np.sin(roll)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


@dataclass(frozen=True)
class DhRow:
    """One D-H table row; the field named by ``kind`` is the joint variable.

    The stored value of the variable field acts as a constant offset added
    to the joint value (zero in all bundled robots).
    """

    kind: str                  # REVOLUTE or PRISMATIC
    theta_deg: float
    d: float
    a: float
    alpha_deg: float
    q_min: float = -180.0      # degrees for revolute, length units for prismatic
    q_max: float = 180.0

    def __post_init__(self):
        if self.kind not in (REVOLUTE, PRISMATIC):
            raise ValueError(f"unknown joint kind {self.kind!r}")
        if self.q_min > self.q_max:
            raise ValueError("q_min exceeds q_max")


@dataclass(frozen=True)
class Pose:
    """Task-space pose: position in the model's length unit + RPY radians."""

    position: np.ndarray
    orientation: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.position, self.orientation])

    @staticmethod
    def from_vector(v) -> "Pose":
        v = np.asarray(v, dtype=float)
        return Pose(position=v[:3].copy(), orientation=v[3:6].copy())


@dataclass(frozen=True)
class JacobianMatrix:
    """A task-rows x joints Jacobian with its row/column labels."""

    matrix: np.ndarray
    row_labels: tuple
    col_labels: tuple


@dataclass(frozen=True)
class RobotModel:
    """An immutable serial-chain model.

    ``step_cap_rad`` and ``stall_window`` are optional solver safeguards
    declared per robot (see the model file format); ``None`` disables them.
    """

    name: str
    rows: tuple
    length_unit: str = "mm"
    task_components: tuple = TASK_COMPONENTS
    step_cap_rad: float | None = None
    stall_window: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "task_components", tuple(self.task_components))
        if not self.rows:
            raise ValueError("a robot needs at least one joint")
        if self.length_unit not in UNIT_IN_METERS:
            raise ValueError(f"unknown length unit {self.length_unit!r}")
        if not self.task_components:
            raise ValueError("task_components must be non-empty")
        bad = [c for c in self.task_components if c not in TASK_COMPONENTS]
        if bad:
            raise ValueError(f"unknown task components {bad}")

    @property
    def dof(self) -> int:
        return len(self.rows)

    @property
    def joint_kinds(self) -> tuple:
        return tuple(r.kind for r in self.rows)

    def task_indices(self) -> np.ndarray:
        return np.array([TASK_COMPONENTS.index(c) for c in self.task_components])

    def has_orientation_rows(self) -> bool:
        return any(c not in POSITION_COMPONENTS for c in self.task_components)

    def check_joints(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dof,):
            raise ValueError(f"expected {self.dof} joint values, got shape {q.shape}")
        return q

    def kernel_arrays(self):
        theta = np.array([np.deg2rad(r.theta_deg) for r in self.rows])
        d = np.array([r.d for r in self.rows])
        a = np.array([r.a for r in self.rows])
        alpha = np.array([np.deg2rad(r.alpha_deg) for r in self.rows])
        kinds = np.array([0 if r.kind == REVOLUTE else 1 for r in self.rows], dtype=np.int8)
        return theta, d, a, alpha, kinds


def intermediate_frames(model: RobotModel, q) -> np.ndarray:
    """All cumulative transforms T^0_i, i = 0..n (identity first)."""
    q = model.check_joints(q)
    theta, d, a, alpha, kinds = model.kernel_arrays()
    return kernels.dh_frames(theta, d, a, alpha, kinds, q)


def forward_kinematics(model: RobotModel, q) -> Pose:
    """End-effector pose from the product of the per-row transforms."""
    T = intermediate_frames(model, q)[-1]
    return Pose(position=T[:3, 3].copy(),
                orientation=kernels.rpy_from_matrix(T[:3, :3]))


def pose_vector(model: RobotModel, q) -> np.ndarray:
    return forward_kinematics(model, q).as_vector()


def geometric_jacobian(model: RobotModel, q, frames=None) -> JacobianMatrix:
    """Velocity Jacobian built from joint axes and origins.

    Orientation rows are angular-velocity components, so a prismatic
    column has a zero orientation block.
    """
    q = model.check_joints(q)
    if frames is None:
        frames = intermediate_frames(model, q)
    _, _, _, _, kinds = model.kernel_arrays()
    J6 = kernels.geometric_jacobian6(frames, kinds)
    return _to_jacobian(model, J6)


def numerical_jacobian(model: RobotModel, q, step: float = 0.01) -> JacobianMatrix:
    """Forward-difference Jacobian of the pose map.

    Column c is (pose(q + step e_c) - pose(q)) / step with orientation
    differences wrapped to the branch nearest the unperturbed pose.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    q = model.check_joints(q)
    base = pose_vector(model, q)
    n = model.dof
    J6 = np.zeros((6, n))
    for c in range(n):
        qp = q.copy()
        qp[c] += step
        diff = pose_vector(model, qp) - base
        diff[3:] = wrap_angle(diff[3:])
        J6[:, c] = diff / step
    return _to_jacobian(model, J6)


GIMBAL_TOLERANCE = 1e-6
_RICHARDSON_STEP = 1e-4


def analytical_jacobian(model: RobotModel, q) -> JacobianMatrix:
    """Partial derivatives of the pose map, d(pose)/d(joints).

    Realized as 4th-order Richardson-extrapolated central differences, so
    the orientation rows are true RPY rates (distinct from the geometric
    Jacobian's angular-velocity rows). Raises OrientationSingularError
    within 1e-6 of pitch = +-pi/2 when the model has orientation rows,
    since RPY rates blow up at gimbal lock.
    """
    q = model.check_joints(q)
    base = pose_vector(model, q)
    if model.has_orientation_rows():
        if abs(abs(base[4]) - np.pi / 2.0) < GIMBAL_TOLERANCE:
            raise OrientationSingularError(
                f"pitch {base[4]:.9f} is within {GIMBAL_TOLERANCE} of gimbal lock"
            )
    n = model.dof
    h = _RICHARDSON_STEP
    J6 = np.zeros((6, n))
    for c in range(n):
        diffs = []
        for mult in (1.0, 2.0):
            qp = q.copy(); qp[c] += mult * h
            qm = q.copy(); qm[c] -= mult * h
            diff = pose_vector(model, qp) - pose_vector(model, qm)
            diff[3:] = wrap_angle(diff[3:])
            diffs.append(diff)
        J6[:, c] = (8.0 * diffs[0] - diffs[1]) / (12.0 * h)
    return _to_jacobian(model, J6)


def _to_jacobian(model: RobotModel, J6) -> JacobianMatrix:
    idx = model.task_indices()
    cols = tuple(f"q{i + 1}{r.kind}" for i, r in enumerate(model.rows))
    return JacobianMatrix(matrix=J6[idx], row_labels=model.task_components, col_labels=cols)


def rescale_units(model: RobotModel, q, target_unit: str):
    """Re-express the model (and prismatic joint values) in another unit.

    Lengths (d, a constants, prismatic values and their limits) are
    multiplied by the conversion factor; angles are untouched.
    """
    if target_unit not in UNIT_IN_METERS:
        raise ValueError(f"unknown length unit {target_unit!r}")
    q = model.check_joints(q)
    factor = UNIT_IN_METERS[model.length_unit] / UNIT_IN_METERS[target_unit]
    new_rows = []
    new_q = q.copy()
    for i, r in enumerate(model.rows):
        if r.kind == PRISMATIC:
            new_rows.append(replace(r, d=r.d * factor, a=r.a * factor,
                                    q_min=r.q_min * factor, q_max=r.q_max * factor))
            new_q[i] = q[i] * factor
        else:
            new_rows.append(replace(r, d=r.d * factor, a=r.a * factor))
    new_model = replace(model, rows=tuple(new_rows), length_unit=target_unit)
    return new_model, new_q


# ---------------------------------------------------------------------------
# model file format (one D-H row per line, versioned header)

def dumps_model(model: RobotModel) -> str:
    """Serialize a model to the line-oriented .robot format."""
    lines = [
        MODEL_FORMAT_HEADER,
        f"name {model.name}",
        f"unit {model.length_unit}",
        "task " + " ".join(model.task_components),
        "stepcap " + ("none" if model.step_cap_rad is None else repr(model.step_cap_rad)),
        "stallwindow " + ("none" if model.stall_window is None else str(model.stall_window)),
        "# kind theta[deg] d a alpha[deg] qmin qmax",
    ]
    for r in model.rows:
        nums = " ".join(repr(float(v))
                        for v in (r.theta_deg, r.d, r.a, r.alpha_deg, r.q_min, r.q_max))
        lines.append(f"joint {r.kind} {nums}")
    return "\n".join(lines) + "\n"


def loads_model(text: str) -> RobotModel:
    """Parse the .robot format produced by dumps_model."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != MODEL_FORMAT_HEADER:
        raise ValueError(f"missing '{MODEL_FORMAT_HEADER}' header")
    fields = {"stepcap": "none", "stallwindow": "none"}
    rows = []
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "joint":
            parts = rest.split()
            if len(parts) != 7:
                raise ValueError(f"malformed joint line: {ln!r}")
            kind = parts[0]
            theta, d, a, alpha, qmin, qmax = (float(p) for p in parts[1:])
            rows.append(DhRow(kind=kind, theta_deg=theta, d=d, a=a,
                              alpha_deg=alpha, q_min=qmin, q_max=qmax))
        elif key in ("name", "unit", "task", "stepcap", "stallwindow"):
            fields[key] = rest.strip()
        else:
            raise ValueError(f"unknown model-file key {key!r}")
    for required in ("name", "unit", "task"):
        if required not in fields:
            raise ValueError(f"model file lacks '{required}'")
    cap = None if fields["stepcap"] == "none" else float(fields["stepcap"])
    window = None if fields["stallwindow"] == "none" else int(fields["stallwindow"])
    return RobotModel(
        name=fields["name"],
        rows=tuple(rows),
        length_unit=fields["unit"],
        task_components=tuple(fields["task"].split()),
        step_cap_rad=cap,
        stall_window=window,
    )

"""Bundled robot definitions and the random-motion generator.

Six serial arms ship with the package (lengths in millimeters as
tabulated). Random motions draw the start and the target-generating joint
vectors uniformly within each joint's declared range and take the target
pose from forward kinematics, so every target is reachable by
construction. The generator is numpy's PCG64 via default_rng, seeded per
call, so motion lists reproduce across platforms.
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from gikin.kinematics import (
    PRISMATIC,
    Pose,
    RobotModel,
    dumps_model,
    forward_kinematics,
    loads_model,
)

ROBOT_NAMES = ("planar3", "scara4", "stanford5", "stanford6", "gp66plus1", "wam7")


@dataclass(frozen=True)
class MotionSpec:
    """One benchmark motion: start joints, target pose, and its provenance."""

    q0: np.ndarray
    d_final: Pose
    target_joints: np.ndarray
    seed: int
    index: int


def load_robot(name: str) -> RobotModel:
    """Load a bundled robot by name (lengths in mm as tabulated)."""
    if name not in ROBOT_NAMES:
        raise KeyError(f"unknown robot {name!r}; available: {', '.join(ROBOT_NAMES)}")
    text = resources.files("gikin.models").joinpath(f"{name}.robot").read_text()
    return loads_model(text)


def save_robot(model: RobotModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_model(model))


def _draw_joints(model: RobotModel, rng) -> np.ndarray:
    q = np.empty(model.dof)
    for i, row in enumerate(model.rows):
        lo, hi = row.q_min, row.q_max
        if row.kind == PRISMATIC:
            q[i] = rng.uniform(lo, hi)
        else:
            q[i] = rng.uniform(np.deg2rad(lo), np.deg2rad(hi))
    return q


def random_motions(model: RobotModel, count: int, seed: int) -> list:
    """Deterministic list of reachable random motions."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    motions = []
    for k in range(count):
        q0 = _draw_joints(model, rng)
        qt = _draw_joints(model, rng)
        motions.append(
            MotionSpec(
                q0=q0,
                d_final=forward_kinematics(model, qt),
                target_joints=qt,
                seed=seed,
                index=k,
            )
        )
    return motions


def dumps_motions(motions) -> str:
    """Line-oriented serialization of a motion list (for re-runs)."""
    lines = ["gikin-motions v1"]
    for m in motions:
        q0 = " ".join(repr(float(v)) for v in m.q0)
        qt = " ".join(repr(float(v)) for v in m.target_joints)
        lines.append(f"motion {m.seed} {m.index} q0 {q0} qt {qt}")
    return "\n".join(lines) + "\n"


def loads_motions(text: str, model: RobotModel) -> list:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "gikin-motions v1":
        raise ValueError("missing 'gikin-motions v1' header")
    n = model.dof
    motions = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] != "motion" or parts[3] != "q0" or parts[4 + n] != "qt":
            raise ValueError(f"malformed motion line: {ln!r}")
        seed, index = int(parts[1]), int(parts[2])
        q0 = np.array([float(v) for v in parts[4:4 + n]])
        qt = np.array([float(v) for v in parts[5 + n:5 + 2 * n]])
        motions.append(
            MotionSpec(q0=q0, d_final=forward_kinematics(model, qt),
                       target_joints=qt, seed=seed, index=index)
        )
    return motions

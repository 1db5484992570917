"""Mapping a robot's structure to the mixed-inverse block partition.

Rule: every revolute joint preceding a prismatic joint whose z-axis is not
parallel to that prismatic joint's axis must be handled unit-consistently,
together with the prismatic joint itself. When any column lands in the W
block, the position task rows go there too; orientation rows never do.
"""

from dataclasses import dataclass

import numpy as np

from gikin.kinematics import (
    POSITION_COMPONENTS,
    PRISMATIC,
    REVOLUTE,
    RobotModel,
    intermediate_frames,
)
from gikin.linalg import BlockPartition

PARALLEL_TOLERANCE = 1e-6

PURE_MP = "PureMP"
PURE_UC = "PureUC"
TRUE_MIXED = "TrueMixed"

# Reference configuration for the structural (static) check: a fixed
# generic set of joint angles. Zero is deliberately avoided because D-H
# zero configurations routinely align axes that are skew at generic ones
# (the alignment is an artifact of the reference posture, not of the
# robot's structure).
_REFERENCE_ANGLE_BASE = 0.4
_REFERENCE_ANGLE_STEP = 0.3


def reference_configuration(model: RobotModel) -> np.ndarray:
    q = np.zeros(model.dof)
    for i, row in enumerate(model.rows):
        if row.kind == REVOLUTE:
            q[i] = _REFERENCE_ANGLE_BASE + _REFERENCE_ANGLE_STEP * i
        else:
            q[i] = 0.5 * (row.q_min + row.q_max)
    return q


@dataclass(frozen=True)
class PartitionDecision:
    """A block partition plus how it reduces and why."""

    partition: BlockPartition
    reduced_form: str
    axis_report: dict   # prismatic joint index -> non-parallel prior revolute indices

    def __post_init__(self):
        if self.reduced_form not in (PURE_MP, PURE_UC, TRUE_MIXED):
            raise ValueError(f"unknown reduced form {self.reduced_form!r}")


def _decide(model: RobotModel, frames) -> PartitionDecision:
    kinds = model.joint_kinds
    axis_report = {}
    w_cols: set = set()
    for j, kind_j in enumerate(kinds):
        if kind_j != PRISMATIC:
            continue
        zj = frames[j, :3, 2]
        affecting = []
        for i in range(j):
            if kinds[i] != REVOLUTE:
                continue
            zi = frames[i, :3, 2]
            # anti-parallel counts as parallel: rotation about -z leaves the
            # prismatic direction invariant just the same
            if np.linalg.norm(np.cross(zi, zj)) > PARALLEL_TOLERANCE:
                affecting.append(i)
        axis_report[j] = affecting
        if affecting:
            w_cols.update(affecting)
            w_cols.add(j)
    if w_cols:
        w_rows = tuple(
            r for r, comp in enumerate(model.task_components)
            if comp in POSITION_COMPONENTS
        )
    else:
        w_rows = ()
    partition = BlockPartition(w_rows=w_rows, w_cols=tuple(sorted(w_cols)))
    m = len(model.task_components)
    n = model.dof
    if partition.is_empty():
        form = PURE_MP
    elif partition.covers(m, n):
        form = PURE_UC
    else:
        form = TRUE_MIXED
    return PartitionDecision(partition=partition, reduced_form=form, axis_report=axis_report)


def dynamic_partition(model: RobotModel, q) -> PartitionDecision:
    """Partition from the joint axes at the given configuration.

    Re-check this along a motion: configurations can temporarily align a
    revolute axis with a prismatic one, dropping the revolute joint from
    the W block until the alignment breaks.
    """
    frames = intermediate_frames(model, q)
    return _decide(model, frames)


def static_partition(model: RobotModel) -> PartitionDecision:
    """Structural partition, evaluated at the generic reference configuration."""
    return dynamic_partition(model, reference_configuration(model))

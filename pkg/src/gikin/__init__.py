"""gikin: generalized-inverse kinematics for serial manipulators.

Dense generalized inverses (Moore-Penrose, unit-consistent, mixed block),
D-H forward kinematics and Jacobians, a block-partition rule for mixing
the inverses, an iterative IK solver, and the experiment harness that
demonstrates unit- and rotation-consistency of end-effector paths.
"""

from gikin._backend import BACKEND
from gikin.baselines import (
    BaselineParams,
    damped_jacobian,
    error_damped,
    filtered_jacobian,
    improved_error_damped,
    selectively_damped,
    svf_inverse,
)
from gikin.catalog import MotionSpec, load_robot, random_motions
from gikin.kinematics import (
    DhRow,
    JacobianMatrix,
    OrientationSingularError,
    Pose,
    RobotModel,
    analytical_jacobian,
    forward_kinematics,
    geometric_jacobian,
    intermediate_frames,
    loads_model,
    dumps_model,
    numerical_jacobian,
    rescale_units,
    wrap_angle,
)
from gikin.linalg import (
    BalancingError,
    BlockPartition,
    DecompositionError,
    ScalingDecomposition,
    SvdFactors,
    mp_inverse,
    mx_inverse,
    scaling_decompose,
    svd,
    uc_inverse,
)
from gikin.partition import (
    PartitionDecision,
    dynamic_partition,
    static_partition,
)
from gikin.solver import IKConfig, IKResult, SolverError, pose_error, solve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BalancingError",
    "BaselineParams",
    "BlockPartition",
    "DecompositionError",
    "DhRow",
    "IKConfig",
    "IKResult",
    "JacobianMatrix",
    "MotionSpec",
    "OrientationSingularError",
    "PartitionDecision",
    "Pose",
    "RobotModel",
    "ScalingDecomposition",
    "SolverError",
    "SvdFactors",
    "analytical_jacobian",
    "damped_jacobian",
    "dumps_model",
    "dynamic_partition",
    "error_damped",
    "filtered_jacobian",
    "forward_kinematics",
    "geometric_jacobian",
    "improved_error_damped",
    "intermediate_frames",
    "load_robot",
    "loads_model",
    "mp_inverse",
    "mx_inverse",
    "numerical_jacobian",
    "pose_error",
    "random_motions",
    "rescale_units",
    "scaling_decompose",
    "selectively_damped",
    "solve",
    "static_partition",
    "svd",
    "svf_inverse",
    "uc_inverse",
    "wrap_angle",
]

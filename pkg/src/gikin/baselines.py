"""Comparison inverse-Jacobian methods.

Seven damped/filtered alternatives to the plain generalized inverses. All
return an update matrix except selectively_damped, which maps the task
error straight to a joint update. None of these is unit-consistent; they
exist for the solver benchmarks.
"""

from dataclasses import dataclass

import numpy as np

from gikin.linalg import mp_inverse


@dataclass(frozen=True)
class BaselineParams:
    damping_lambda: float = 0.1       # JD and the JF filter gain
    jf_sigma_threshold: float = 0.01
    svf_nu: float = 10.0
    svf_sigma_zero: float = 0.005
    sd_gamma_max: float = np.pi / 4
    ied_bias: float = 1e-3

    def __post_init__(self):
        if self.damping_lambda < 0:
            raise ValueError("damping_lambda must be >= 0")
        if self.jf_sigma_threshold <= 0 or self.svf_sigma_zero <= 0:
            raise ValueError("filter thresholds must be positive")
        if self.svf_nu < 2:
            raise ValueError("svf_nu must be >= 2")
        if self.sd_gamma_max <= 0 or self.ied_bias <= 0:
            raise ValueError("sd_gamma_max and ied_bias must be positive")


def damped_jacobian(J, params: BaselineParams = BaselineParams()) -> np.ndarray:
    """JD: J^T (J J^T + lambda^2 I)^-1."""
    J = np.asarray(J, dtype=float)
    lam2 = params.damping_lambda ** 2
    m = J.shape[0]
    return np.linalg.solve(J @ J.T + lam2 * np.eye(m), J).T


def error_damped(J, error_norm: float) -> np.ndarray:
    """ED: J^T (J J^T + e I)^-1 with e the current task error norm."""
    if error_norm < 0:
        raise ValueError("error_norm must be >= 0")
    J = np.asarray(J, dtype=float)
    m = J.shape[0]
    if error_norm == 0.0:
        return mp_inverse(J)
    return np.linalg.solve(J @ J.T + error_norm * np.eye(m), J).T


def improved_error_damped(J, error_vector, bias: float = 1e-3) -> np.ndarray:
    """IED: (J^T J + (e^T e + bias) I)^-1 J^T."""
    if bias <= 0:
        raise ValueError("bias must be positive")
    J = np.asarray(J, dtype=float)
    e = np.asarray(error_vector, dtype=float)
    n = J.shape[1]
    damping = float(e @ e) + bias
    return np.linalg.solve(J.T @ J + damping * np.eye(n), J.T)


def filtered_jacobian(J, params: BaselineParams = BaselineParams()) -> np.ndarray:
    """JF: singular values below the threshold are lifted before inversion.

    sigma -> sigma + lambda (1 - sigma / sigma_t) for sigma < sigma_t, which
    bounds the inverse norm by 1/min(h) without touching the well-conditioned
    part of the spectrum.
    """
    J = np.asarray(J, dtype=float)
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    lam, st = params.damping_lambda, params.jf_sigma_threshold
    h = np.where(s < st, s + lam * (1.0 - s / st), s)
    return (Vt.T / h) @ U.T


def selectively_damped(J, error_vector, gamma_max: float = np.pi / 4) -> np.ndarray:
    """SD: per-singular-direction response clamping; returns the update itself.

    Each direction contributes (u_i . e / sigma_i) v_i, clamped so its
    joint-space magnitude never exceeds gamma_max. Small errors reproduce
    the Moore-Penrose response.
    """
    if gamma_max <= 0:
        raise ValueError("gamma_max must be positive")
    J = np.asarray(J, dtype=float)
    e = np.asarray(error_vector, dtype=float)
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    cutoff = max(J.shape) * (s[0] if s.size else 0.0) * 1e-12
    dq = np.zeros(J.shape[1])
    for i in range(s.size):
        if s[i] <= cutoff:
            continue
        w = float(U[:, i] @ e) / s[i]
        if abs(w) > gamma_max:
            w = np.sign(w) * gamma_max
        dq += w * Vt[i]
    return dq


def svf_inverse(J, params: BaselineParams = BaselineParams()) -> np.ndarray:
    """SVF: every singular value passes through a smooth positive filter.

    h(s) = (s^3 + nu s^2 + 2 s + 2 s0) / (s^2 + nu s + 2); h(0) = s0 and
    h(s) -> s for large s, so the filtered inverse always has bounded norm.
    """
    J = np.asarray(J, dtype=float)
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    nu, s0 = params.svf_nu, params.svf_sigma_zero
    h = (s**3 + nu * s**2 + 2.0 * s + 2.0 * s0) / (s**2 + nu * s + 2.0)
    return (Vt.T / h) @ U.T

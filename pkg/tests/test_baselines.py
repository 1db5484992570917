"""Damped/filtered inverse-Jacobian baselines."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gikin.baselines import (
    BaselineParams,
    damped_jacobian,
    error_damped,
    filtered_jacobian,
    improved_error_damped,
    selectively_damped,
    svf_inverse,
)
from gikin.linalg import mp_inverse


def random_wide(rng, m=2, n=3):
    return rng.standard_normal((m, n))


# ---------------------------------------------------------------------------
# damped Jacobian (JD)


def test_jd_zero_damping_is_inverse():
    A = np.array([[2.0, 1.0], [0.5, 3.0]])
    got = damped_jacobian(A, BaselineParams(damping_lambda=0.0))
    assert_allclose(got, np.linalg.inv(A), atol=1e-12)


def test_jd_scalar_case():
    s, lam = 3.0, 0.7
    got = damped_jacobian(np.array([[s]]), BaselineParams(damping_lambda=lam))
    assert got[0, 0] == pytest.approx(s / (s**2 + lam**2))


def test_jd_matches_dense_solve_oracle():
    rng = np.random.default_rng(0)
    lam = 0.1
    for _ in range(20):
        J = random_wide(rng)
        # oracle: solve (J J^T + lam^2 I) column by column
        M = J @ J.T + lam**2 * np.eye(2)
        expected = np.column_stack([np.linalg.solve(M, basis) for basis in np.eye(2)])
        expected = J.T @ expected
        assert_allclose(damped_jacobian(J, BaselineParams(damping_lambda=lam)),
                        expected, atol=1e-12)


# ---------------------------------------------------------------------------
# error damping (ED)


def test_ed_scalar_case():
    s, e = 2.0, 0.3
    got = error_damped(np.array([[s]]), e)
    assert got[0, 0] == pytest.approx(s / (s**2 + e))


def test_ed_zero_error_invertible():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert_allclose(error_damped(A, 0.0), np.linalg.inv(A), atol=1e-10)


def test_ed_matches_dense_solve_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        J = random_wide(rng)
        e = float(rng.uniform(0.01, 2.0))
        expected = J.T @ np.linalg.inv(J @ J.T + e * np.eye(2))
        assert_allclose(error_damped(J, e), expected, atol=1e-12)


def test_ed_rejects_negative_error():
    with pytest.raises(ValueError):
        error_damped(np.eye(2), -1.0)


# ---------------------------------------------------------------------------
# improved error damping (IED)


def test_ied_zero_jacobian_bounded_by_bias():
    J = np.zeros((2, 3))
    e = np.array([0.5, 0.5])
    got = improved_error_damped(J, e, bias=1e-3)
    assert_allclose(got, np.zeros((3, 2)), atol=0)


def test_ied_damped_normal_matrix_eigenvalue_floor():
    rng = np.random.default_rng(2)
    bias = 1e-3
    for _ in range(20):
        J = rng.standard_normal((2, 3)) * 1e-4   # near-singular regime
        e = rng.standard_normal(2)
        damping = float(e @ e) + bias
        M = J.T @ J + damping * np.eye(3)
        assert np.linalg.eigvalsh(M).min() >= bias - 1e-12


def test_ied_scalar_case():
    s, bias = 2.0, 1e-3
    e = np.array([0.1])
    got = improved_error_damped(np.array([[s]]), e, bias=bias)
    assert got[0, 0] == pytest.approx(s / (s**2 + 0.01 + bias))


# ---------------------------------------------------------------------------
# filtered Jacobian (JF)


def test_jf_well_conditioned_equals_mp():
    A = np.diag([2.0, 1.5])
    got = filtered_jacobian(A, BaselineParams(jf_sigma_threshold=0.01))
    assert_allclose(got, mp_inverse(A), atol=1e-12)


def test_jf_diagonal_filtering():
    p = BaselineParams(damping_lambda=0.1, jf_sigma_threshold=0.01)
    sigma = 0.004
    A = np.diag([1.0, sigma])
    h = sigma + p.damping_lambda * (1.0 - sigma / p.jf_sigma_threshold)
    got = filtered_jacobian(A, p)
    assert got[1, 1] == pytest.approx(1.0 / h)
    assert got[0, 0] == pytest.approx(1.0)


def test_jf_norm_bound_near_singularity():
    rng = np.random.default_rng(3)
    p = BaselineParams(damping_lambda=0.1, jf_sigma_threshold=0.01)
    # h(s) on [0, s_t] dips no lower than h(s_t) = s_t
    bound = 1.0 / p.jf_sigma_threshold
    for _ in range(30):
        U = np.linalg.qr(rng.standard_normal((2, 2)))[0]
        V = np.linalg.qr(rng.standard_normal((3, 3)))[0]
        s = np.array([1.0, rng.uniform(0, 1e-4)])
        J = U @ np.hstack([np.diag(s), np.zeros((2, 1))]) @ V
        got = filtered_jacobian(J, p)
        assert np.linalg.norm(got, 2) <= bound + 1e-9


# ---------------------------------------------------------------------------
# selective damping (SD)


def test_sd_small_error_is_mp_response():
    rng = np.random.default_rng(4)
    for _ in range(20):
        J = random_wide(rng)
        e = rng.standard_normal(2) * 1e-4
        assert_allclose(selectively_damped(J, e), mp_inverse(J) @ e, atol=1e-10)


def test_sd_per_direction_clamp():
    gamma = 0.25
    J = np.diag([1.0, 1e-3])
    e = np.array([0.1, 1.0])     # second direction wants a 1000-radian move
    dq = selectively_damped(J, e, gamma_max=gamma)
    # oracle: clamp each singular direction's joint-space magnitude
    U, s, Vt = np.linalg.svd(J)
    expected = np.zeros(2)
    for i in range(2):
        w = (U[:, i] @ e) / s[i]
        w = np.clip(w, -gamma, gamma)
        expected += w * Vt[i]
    assert_allclose(dq, expected, atol=1e-12)
    assert np.max(np.abs(dq)) <= 2 * gamma + 1e-12


def test_sd_zero_error_zero_update():
    J = np.array([[1.0, 2.0, 0.5]])
    assert_allclose(selectively_damped(J, np.zeros(1)), np.zeros(3), atol=0)


def test_sd_singular_direction_ignored():
    J = np.array([[1.0, 0.0], [0.0, 0.0]])
    dq = selectively_damped(J, np.array([0.2, 5.0]))
    assert_allclose(dq, [0.2, 0.0], atol=1e-12)


# ---------------------------------------------------------------------------
# singular value filtering (SVF)


def test_svf_zero_singular_value_maps_to_sigma_zero():
    p = BaselineParams(svf_nu=10.0, svf_sigma_zero=0.005)
    got = svf_inverse(np.zeros((2, 2)), p)
    assert_allclose(got, np.eye(2) / p.svf_sigma_zero, atol=1e-12)


def test_svf_large_sigma_limit():
    p = BaselineParams(svf_nu=10.0, svf_sigma_zero=0.005)
    for sigma in (100.0 * p.svf_nu, 5000.0):
        got = svf_inverse(np.array([[sigma]]), p)
        assert got[0, 0] * sigma == pytest.approx(1.0, rel=1e-2)


def test_svf_diagonal_closed_form():
    p = BaselineParams(svf_nu=10.0, svf_sigma_zero=0.005)
    s = np.array([2.0, 0.3])
    h = (s**3 + p.svf_nu * s**2 + 2 * s + 2 * p.svf_sigma_zero) / (s**2 + p.svf_nu * s + 2)
    got = svf_inverse(np.diag(s), p)
    assert_allclose(np.diag(got), 1.0 / h, atol=1e-12)


def test_svf_sigma_zero_limit_recovers_inverse():
    A = np.array([[1.5, 0.2], [0.1, 2.0]])
    got = svf_inverse(A, BaselineParams(svf_nu=10.0, svf_sigma_zero=1e-12))
    assert_allclose(got, np.linalg.inv(A), atol=1e-6)


# ---------------------------------------------------------------------------
# shared properties


def test_all_baselines_finite_on_singular_jacobian():
    J = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])   # rank 1
    p = BaselineParams()
    e = np.array([1.0, -1.0])
    results = [
        damped_jacobian(J, p) @ e,
        error_damped(J, float(np.linalg.norm(e))) @ e,
        improved_error_damped(J, e, p.ied_bias) @ e,
        filtered_jacobian(J, p) @ e,
        svf_inverse(J, p) @ e,
        selectively_damped(J, e, p.sd_gamma_max),
    ]
    for dq in results:
        assert np.all(np.isfinite(dq))
        assert np.linalg.norm(dq) < 1e4


def test_baselines_approach_inverse_as_parameters_vanish():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    inv = np.linalg.inv(A)
    small = BaselineParams(damping_lambda=1e-8, jf_sigma_threshold=0.01,
                           svf_nu=2.0, svf_sigma_zero=1e-12,
                           sd_gamma_max=1e6, ied_bias=1e-12)
    assert_allclose(damped_jacobian(A, small), inv, atol=1e-6)
    assert_allclose(error_damped(A, 0.0), inv, atol=1e-6)
    assert_allclose(improved_error_damped(A, np.zeros(3), small.ied_bias), inv, atol=1e-6)
    assert_allclose(filtered_jacobian(A, small), inv, atol=1e-6)
    assert_allclose(svf_inverse(A, small), inv, atol=1e-6)
    e = np.array([0.3, -0.2, 0.4])
    assert_allclose(selectively_damped(A, e, small.sd_gamma_max), inv @ e, atol=1e-6)


def test_no_baseline_is_unit_consistent():
    rng = np.random.default_rng(6)
    J = rng.standard_normal((2, 3))
    d = np.array([10.0, 0.2])
    e = np.array([1.0, 5.0, 0.1])
    scaled = d[:, None] * J * e[None, :]
    p = BaselineParams()
    err = np.array([0.7, -0.4])

    def violation(inv_plain, inv_scaled):
        # unit consistency would demand inv_scaled == diag(1/e) inv_plain diag(1/d)
        predicted = (inv_plain / e[:, None]) / d[None, :]
        return np.max(np.abs(inv_scaled - predicted)) / max(1.0, np.max(np.abs(predicted)))

    assert violation(damped_jacobian(J, p), damped_jacobian(scaled, p)) > 1e-3
    assert violation(error_damped(J, 1.0), error_damped(scaled, 1.0)) > 1e-3
    assert violation(improved_error_damped(J, err, p.ied_bias),
                     improved_error_damped(scaled, err, p.ied_bias)) > 1e-3
    assert violation(filtered_jacobian(J, p), filtered_jacobian(scaled, p)) > 1e-3
    assert violation(svf_inverse(J, p), svf_inverse(scaled, p)) > 1e-3
    # SD produces updates; compare the implied responses on a matching error
    dq_plain = selectively_damped(J, err, p.sd_gamma_max)
    dq_scaled = selectively_damped(scaled, d * err, p.sd_gamma_max)
    predicted = dq_plain / e
    assert np.max(np.abs(dq_scaled - predicted)) / max(1.0, np.max(np.abs(predicted))) > 1e-3

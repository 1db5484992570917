"""Pure-numpy implementations of the hot kernels.

Signature-compatible twin of the compiled ``gikin._kernels`` extension;
``gikin._backend`` picks whichever is available. Everything here is plain
ndarray in / ndarray out so both variants stay trivially interchangeable.
"""

import numpy as np

BACKEND_NAME = "python"


def dh_frames(theta, d, a, alpha, kinds, q):
    """Cumulative homogeneous transforms T^0_i for a classic D-H chain.

    theta/d/a/alpha are the per-row constants (radians / length units),
    kinds is int8 (0 revolute, 1 prismatic) and q the joint values. The
    joint variable is added to the stored constant of its row. Returns an
    (n+1, 4, 4) array whose first entry is the identity.
    """
    n = theta.shape[0]
    out = np.empty((n + 1, 4, 4))
    T = np.eye(4)
    out[0] = T
    for i in range(n):
        th = theta[i] + (q[i] if kinds[i] == 0 else 0.0)
        dd = d[i] + (q[i] if kinds[i] == 1 else 0.0)
        ct, st = np.cos(th), np.sin(th)
        ca, sa = np.cos(alpha[i]), np.sin(alpha[i])
        A = np.array(
            [
                [ct, -st * ca, st * sa, a[i] * ct],
                [st, ct * ca, -ct * sa, a[i] * st],
                [0.0, sa, ca, dd],
                [0.0, 0.0, 0.0, 1.0],
            ]
        )
        T = T @ A
        out[i + 1] = T
    return out


def geometric_jacobian6(frames, kinds):
    """Full 6xn geometric Jacobian from precomputed frames.

    Position block: z_{i-1} x (p - p_{i-1}) for revolute columns, z_{i-1}
    for prismatic ones; orientation block z_{i-1} or zero respectively.
    """
    n = kinds.shape[0]
    p = frames[n, :3, 3]
    J = np.zeros((6, n))
    for i in range(n):
        z = frames[i, :3, 2]
        if kinds[i] == 1:
            J[:3, i] = z
        else:
            J[:3, i] = np.cross(z, p - frames[i, :3, 3])
            J[3:, i] = z
    return J


def rpy_from_matrix(R):
    """Roll-pitch-yaw of a rotation matrix, R = Rz(yaw) Ry(pitch) Rx(roll).

    Pitch is kept in [-pi/2, pi/2]; at gimbal lock roll is set to zero and
    yaw absorbs the remaining rotation.
    """
    cp = np.hypot(R[0, 0], R[1, 0])
    pitch = np.arctan2(-R[2, 0], cp)
    if cp < 1e-300:
        roll = 0.0
        yaw = np.arctan2(-R[0, 1], R[1, 1])
    else:
        yaw = np.arctan2(R[1, 0], R[0, 0])
        roll = np.arctan2(R[2, 1], R[2, 2])
    return np.array([roll, pitch, yaw])


def rotation_vector(R):
    """Axis-angle vector of a rotation matrix (matrix logarithm)."""
    c = (R[0, 0] + R[1, 1] + R[2, 2] - 1.0) / 2.0
    c = min(1.0, max(-1.0, c))
    th = np.arccos(c)
    v = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    if th < 1e-12:
        return v / 2.0
    if np.pi - th < 1e-7:
        # antipodal case: recover the axis from the symmetric part
        B = (R + np.eye(3)) / 2.0
        i = int(np.argmax(np.diag(B)))
        ax = B[:, i].copy()
        nrm = np.linalg.norm(ax)
        if nrm == 0.0:
            return np.zeros(3)
        ax /= nrm
        if ax[i] < 0:
            ax = -ax
        return th * ax
    return th * v / (2.0 * np.sin(th))


def balance_log(A, tol, max_sweeps):
    """Alternating row/column balancing of |A| in log space.

    Subtracts per-row then per-column means of log|a_ij| over the nonzero
    pattern until the largest adjustment drops below ``tol``. Returns
    (d, Aprime, e, converged_flag) with A = diag(d) Aprime diag(e) and the
    nonzero entries of every row/column of Aprime having geometric mean 1.
    Zero rows/columns keep a scale of 1.
    """
    m, n = A.shape
    mask = A != 0.0
    L = np.zeros_like(A)
    L[mask] = np.log(np.abs(A[mask]))
    ld = np.zeros(m)
    le = np.zeros(n)
    row_has = mask.any(axis=1)
    col_has = mask.any(axis=0)
    converged = False
    for _ in range(max_sweeps):
        delta = 0.0
        for i in range(m):
            if row_has[i]:
                mu = L[i, mask[i]].mean()
                L[i, mask[i]] -= mu
                ld[i] += mu
                if abs(mu) > delta:
                    delta = abs(mu)
        for j in range(n):
            if col_has[j]:
                mu = L[mask[:, j], j].mean()
                L[mask[:, j], j] -= mu
                le[j] += mu
                if abs(mu) > delta:
                    delta = abs(mu)
        if delta < tol:
            converged = True
            break
    Ap = np.zeros_like(A)
    Ap[mask] = np.sign(A[mask]) * np.exp(L[mask])
    return np.exp(ld), Ap, np.exp(le), converged

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels.

Mirror of gikin._kernels_py; same signatures, same semantics. The chain
product, Jacobian assembly and the balancing sweeps dominate solver time
for the small matrices involved, so they are the only parts worth
compiling.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, cos, exp, fabs, hypot, log, sin, sqrt, acos, M_PI

cnp.import_array()

BACKEND_NAME = "compiled"


def dh_frames(double[::1] theta, double[::1] d, double[::1] a,
              double[::1] alpha, signed char[::1] kinds, double[::1] q):
    cdef Py_ssize_t n = theta.shape[0]
    out_arr = np.empty((n + 1, 4, 4))
    cdef double[:, :, ::1] out = out_arr
    cdef double T[4][4]
    cdef double A[4][4]
    cdef double N[4][4]
    cdef Py_ssize_t i, r, c, k
    cdef double th, dd, ct, st, ca, sa, acc

    for r in range(4):
        for c in range(4):
            T[r][c] = 1.0 if r == c else 0.0
            out[0, r, c] = T[r][c]

    for i in range(n):
        th = theta[i]
        dd = d[i]
        if kinds[i] == 0:
            th += q[i]
        else:
            dd += q[i]
        ct = cos(th); st = sin(th)
        ca = cos(alpha[i]); sa = sin(alpha[i])
        A[0][0] = ct; A[0][1] = -st * ca; A[0][2] = st * sa;  A[0][3] = a[i] * ct
        A[1][0] = st; A[1][1] = ct * ca;  A[1][2] = -ct * sa; A[1][3] = a[i] * st
        A[2][0] = 0.0; A[2][1] = sa;      A[2][2] = ca;       A[2][3] = dd
        A[3][0] = 0.0; A[3][1] = 0.0;     A[3][2] = 0.0;      A[3][3] = 1.0
        for r in range(4):
            for c in range(4):
                acc = 0.0
                for k in range(4):
                    acc += T[r][k] * A[k][c]
                N[r][c] = acc
        for r in range(4):
            for c in range(4):
                T[r][c] = N[r][c]
                out[i + 1, r, c] = T[r][c]
    return out_arr


def geometric_jacobian6(double[:, :, ::1] frames, signed char[::1] kinds):
    cdef Py_ssize_t n = kinds.shape[0]
    J_arr = np.zeros((6, n))
    cdef double[:, ::1] J = J_arr
    cdef double px = frames[n, 0, 3]
    cdef double py = frames[n, 1, 3]
    cdef double pz = frames[n, 2, 3]
    cdef Py_ssize_t i
    cdef double zx, zy, zz, rx, ry, rz

    for i in range(n):
        zx = frames[i, 0, 2]; zy = frames[i, 1, 2]; zz = frames[i, 2, 2]
        if kinds[i] == 1:
            J[0, i] = zx; J[1, i] = zy; J[2, i] = zz
        else:
            rx = px - frames[i, 0, 3]
            ry = py - frames[i, 1, 3]
            rz = pz - frames[i, 2, 3]
            J[0, i] = zy * rz - zz * ry
            J[1, i] = zz * rx - zx * rz
            J[2, i] = zx * ry - zy * rx
            J[3, i] = zx; J[4, i] = zy; J[5, i] = zz
    return J_arr


def rpy_from_matrix(double[:, :] R):
    cdef double cp = hypot(R[0, 0], R[1, 0])
    cdef double pitch = atan2(-R[2, 0], cp)
    cdef double roll, yaw
    if cp < 1e-300:
        roll = 0.0
        yaw = atan2(-R[0, 1], R[1, 1])
    else:
        yaw = atan2(R[1, 0], R[0, 0])
        roll = atan2(R[2, 1], R[2, 2])
    out = np.empty(3)
    out[0] = roll; out[1] = pitch; out[2] = yaw
    return out


def rotation_vector(double[:, :] R):
    cdef double c = (R[0, 0] + R[1, 1] + R[2, 2] - 1.0) / 2.0
    cdef double th, vx, vy, vz, nrm, scale
    cdef double b0, b1, b2, ax0, ax1, ax2
    cdef Py_ssize_t best
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    th = acos(c)
    vx = R[2, 1] - R[1, 2]
    vy = R[0, 2] - R[2, 0]
    vz = R[1, 0] - R[0, 1]
    out = np.empty(3)
    if th < 1e-12:
        out[0] = vx / 2.0; out[1] = vy / 2.0; out[2] = vz / 2.0
        return out
    if M_PI - th < 1e-7:
        best = 0
        b0 = (R[0, 0] + 1.0) / 2.0
        b1 = (R[1, 1] + 1.0) / 2.0
        b2 = (R[2, 2] + 1.0) / 2.0
        if b1 > b0 and b1 >= b2:
            best = 1
        elif b2 > b0 and b2 > b1:
            best = 2
        ax0 = (R[0, best] + (1.0 if best == 0 else 0.0)) / 2.0
        ax1 = (R[1, best] + (1.0 if best == 1 else 0.0)) / 2.0
        ax2 = (R[2, best] + (1.0 if best == 2 else 0.0)) / 2.0
        nrm = sqrt(ax0 * ax0 + ax1 * ax1 + ax2 * ax2)
        if nrm == 0.0:
            out[0] = 0.0; out[1] = 0.0; out[2] = 0.0
            return out
        ax0 /= nrm; ax1 /= nrm; ax2 /= nrm
        if (best == 0 and ax0 < 0) or (best == 1 and ax1 < 0) or (best == 2 and ax2 < 0):
            ax0 = -ax0; ax1 = -ax1; ax2 = -ax2
        out[0] = th * ax0; out[1] = th * ax1; out[2] = th * ax2
        return out
    scale = th / (2.0 * sin(th))
    out[0] = vx * scale; out[1] = vy * scale; out[2] = vz * scale
    return out


def balance_log(cnp.ndarray[double, ndim=2] A, double tol, int max_sweeps):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t n = A.shape[1]
    mask_arr = (A != 0.0)
    L_arr = np.zeros((m, n))
    L_arr[mask_arr] = np.log(np.abs(A[mask_arr]))
    cdef double[:, ::1] L = L_arr
    cdef cnp.uint8_t[:, ::1] mask = mask_arr.astype(np.uint8)
    ld_arr = np.zeros(m)
    le_arr = np.zeros(n)
    cdef double[::1] ld = ld_arr
    cdef double[::1] le = le_arr
    cdef Py_ssize_t i, j, sweep
    cdef double mu, delta
    cdef int cnt
    cdef bint converged = False

    row_cnt_arr = mask_arr.sum(axis=1).astype(np.int64)
    col_cnt_arr = mask_arr.sum(axis=0).astype(np.int64)
    cdef long[::1] row_cnt = row_cnt_arr
    cdef long[::1] col_cnt = col_cnt_arr

    for sweep in range(max_sweeps):
        delta = 0.0
        for i in range(m):
            cnt = row_cnt[i]
            if cnt == 0:
                continue
            mu = 0.0
            for j in range(n):
                if mask[i, j]:
                    mu += L[i, j]
            mu /= cnt
            for j in range(n):
                if mask[i, j]:
                    L[i, j] -= mu
            ld[i] += mu
            if fabs(mu) > delta:
                delta = fabs(mu)
        for j in range(n):
            cnt = col_cnt[j]
            if cnt == 0:
                continue
            mu = 0.0
            for i in range(m):
                if mask[i, j]:
                    mu += L[i, j]
            mu /= cnt
            for i in range(m):
                if mask[i, j]:
                    L[i, j] -= mu
            le[j] += mu
            if fabs(mu) > delta:
                delta = fabs(mu)
        if delta < tol:
            converged = True
            break

    Ap_arr = np.zeros((m, n))
    cdef double[:, ::1] Ap = Ap_arr
    cdef double[:, :] Aview = A
    for i in range(m):
        for j in range(n):
            if mask[i, j]:
                Ap[i, j] = exp(L[i, j]) * (1.0 if Aview[i, j] > 0 else -1.0)
    return np.exp(ld_arr), Ap_arr, np.exp(le_arr), converged

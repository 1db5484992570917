"""Dense generalized inverses.

Four inverses of a real matrix A:

* ``mp_inverse``     -- Moore-Penrose; rotation-consistent, unit-inconsistent.
* ``uc_inverse``     -- unit-consistent inverse built from the balanced
  (scaling) decomposition A = D A' E; invariant under positive diagonal
  rescalings of rows and columns.
* ``mx_inverse``     -- mixed block inverse combining the UC inverse on a
  designated top-left block with the MP inverse on the complement.
* ``scaling_decompose`` -- the D A' E factorization itself.

All operations are pure functions of their inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from gikin._backend import kernels

RANK_RCOND = 1e-12          # sigma < max(m,n) * sigma_max * RANK_RCOND counts as zero
BALANCE_TOL = 1e-13
BALANCE_MAX_SWEEPS = 10000


class DecompositionError(RuntimeError):
    """The underlying matrix decomposition failed to converge."""


class BalancingError(RuntimeError):
    """The scaling-decomposition balancing iteration failed to converge."""

    def __init__(self, residual: float):
        super().__init__(f"balancing did not converge (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD of a real matrix: A = U diag(S) V^T."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.S) @ self.V.T


@dataclass(frozen=True)
class ScalingDecomposition:
    """A = diag(D) Aprime diag(E) with unit geometric row/column means."""

    D: np.ndarray
    Aprime: np.ndarray
    E: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.D[:, None] * self.Aprime * self.E[None, :]


@dataclass(frozen=True)
class BlockPartition:
    """Row/column index sets assigned to the unit-consistent (W) block.

    The complements form the rotation-consistent (Z) block. Empty sets are
    legal: an empty W reduces the mixed inverse to Moore-Penrose, a full W
    to the unit-consistent inverse.
    """

    w_rows: tuple = field(default=())
    w_cols: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "w_rows", tuple(self.w_rows))
        object.__setattr__(self, "w_cols", tuple(self.w_cols))
        for name in ("w_rows", "w_cols"):
            idx = getattr(self, name)
            if len(set(idx)) != len(idx):
                raise ValueError(f"{name} contains duplicates: {idx}")

    def validate(self, m: int, n: int) -> None:
        if any(i < 0 or i >= m for i in self.w_rows):
            raise ValueError(f"w_rows {self.w_rows} out of range for {m} rows")
        if any(j < 0 or j >= n for j in self.w_cols):
            raise ValueError(f"w_cols {self.w_cols} out of range for {n} columns")

    def covers(self, m: int, n: int) -> bool:
        return len(self.w_rows) == m and len(self.w_cols) == n

    def is_empty(self) -> bool:
        return not self.w_rows and not self.w_cols


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    if A.size and not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def svd(A) -> SvdFactors:
    """Thin SVD with singular values sorted descending."""
    A = _as_matrix(A)
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc
    return SvdFactors(U=U, S=s, V=Vt.T)


def _rank_cutoff(shape, s) -> float:
    if s.size == 0:
        return 0.0
    return max(shape) * float(s[0]) * RANK_RCOND


def _pinv_from_svd(U, s, Vt, cutoff) -> np.ndarray:
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (Vt.T * inv) @ U.T


def mp_inverse(A) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via SVD.

    Full-rank inputs are equilibrated (rows for wide, columns for tall
    matrices) before the SVD and the exact scale identity is applied
    afterwards; this leaves the value unchanged but keeps the computation
    accurate for badly row- or column-scaled matrices, which is exactly
    the regime the unit-sweep experiments probe.
    """
    A = _as_matrix(A)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m))
    try:
        if m <= n:
            r = np.linalg.norm(A, axis=1)
            r[r == 0] = 1.0
            B = A / r[:, None]
            U, s, Vt = np.linalg.svd(B, full_matrices=False)
            if np.all(s > _rank_cutoff((m, n), s)):
                # full row rank: pinv(diag(r) B) == pinv(B) diag(1/r)
                return ((Vt.T * (1.0 / s)) @ U.T) / r[None, :]
        else:
            c = np.linalg.norm(A, axis=0)
            c[c == 0] = 1.0
            B = A / c[None, :]
            U, s, Vt = np.linalg.svd(B, full_matrices=False)
            if np.all(s > _rank_cutoff((m, n), s)):
                # full column rank: pinv(B diag(c)) == diag(1/c) pinv(B)
                return ((Vt.T * (1.0 / s)) @ U.T) / c[:, None]
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc
    return _pinv_from_svd(U, s, Vt, _rank_cutoff((m, n), s))


def scaling_decompose(A) -> ScalingDecomposition:
    """Balance A into diag(D) A' diag(E).

    The nonzero entries of every row and column of A' have geometric mean
    of absolute values equal to one; zero entries are preserved exactly and
    zero rows/columns keep unit scales. Raises BalancingError if the
    alternating log-space iteration does not converge.
    """
    A = _as_matrix(A)
    d, Ap, e, ok = kernels.balance_log(A, BALANCE_TOL, BALANCE_MAX_SWEEPS)
    if not ok:
        resid = _balance_residual(Ap)
        raise BalancingError(resid)
    return ScalingDecomposition(D=d, Aprime=Ap, E=e)


def _balance_residual(Ap) -> float:
    mask = Ap != 0.0
    worst = 0.0
    with np.errstate(divide="ignore"):
        L = np.where(mask, np.log(np.abs(np.where(mask, Ap, 1.0))), 0.0)
    for i in range(Ap.shape[0]):
        if mask[i].any():
            worst = max(worst, abs(L[i, mask[i]].mean()))
    for j in range(Ap.shape[1]):
        if mask[:, j].any():
            worst = max(worst, abs(L[mask[:, j], j].mean()))
    return worst


def uc_inverse(A) -> np.ndarray:
    """Unit-consistent generalized inverse.

    Computed as E^-1 pinv(A') D^-1 from the scaling decomposition, so for
    any positive diagonals Ds, Es: uc(Ds A Es) == Es^-1 uc(A) Ds^-1. The
    result satisfies the first two Penrose conditions.
    """
    A = _as_matrix(A)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m))
    dec = scaling_decompose(A)
    try:
        U, s, Vt = np.linalg.svd(dec.Aprime, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(str(exc)) from exc
    core = _pinv_from_svd(U, s, Vt, _rank_cutoff((m, n), s))
    return (core / dec.E[:, None]) / dec.D[None, :]


def mx_inverse(A, partition: BlockPartition) -> np.ndarray:
    """Mixed block generalized inverse.

    Rows/columns listed in the partition are permuted to the leading block
    W, the four-block inverse

        [ (W - X Zp Y)^-U              -W^-U X (Z - Y W^-U X)^-P ]
        [ -Z^-P Y (W - X Zp Y)^-U       (Z - Y W^-U X)^-P        ]

    is assembled (Zp = Z^-P), and the inverse permutations restore the
    original ordering. Degenerate blocks collapse to the surviving corner,
    so an empty W yields mp_inverse(A) and a full W yields uc_inverse(A).
    """
    A = _as_matrix(A)
    m, n = A.shape
    partition.validate(m, n)
    w_rows = list(partition.w_rows)
    w_cols = list(partition.w_cols)
    z_rows = [i for i in range(m) if i not in set(w_rows)]
    z_cols = [j for j in range(n) if j not in set(w_cols)]
    rperm = w_rows + z_rows
    cperm = w_cols + z_cols
    P = A[np.ix_(rperm, cperm)]
    k, l = len(w_rows), len(w_cols)
    W, X, Y, Z = P[:k, :l], P[:k, l:], P[k:, :l], P[k:, l:]
    Zp = mp_inverse(Z)
    Wu = uc_inverse(W)
    Swu = uc_inverse(W - X @ Zp @ Y)
    Szp = mp_inverse(Z - Y @ Wu @ X)
    top = np.hstack([Swu, -Wu @ X @ Szp])
    bottom = np.hstack([-Zp @ Y @ Swu, Szp])
    Minv = np.vstack([top, bottom])
    out = np.zeros((n, m))
    out[np.ix_(cperm, rperm)] = Minv
    return out

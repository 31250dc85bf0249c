"""Dense matrix factorizations with explicit rank tolerances.

Every routine here is a pure function of plain float64 arrays. Numerical
rank is decided everywhere by the same rule, ``sigma > relative_epsilon *
max(rows, cols) * sigma_max + absolute_floor``, so ranks computed in
different places stay mutually consistent. Singular-vector and eigenvector
signs are fixed (largest-magnitude entry positive) to make outputs
deterministic for a fixed input.

SVD and symmetric eigendecompositions delegate to LAPACK through
``numpy.linalg``; the column-pivoted QR underlying the complete orthogonal
decomposition is our own kernel (see ``_backend``).
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import SingularScatterError

_SYMMETRY_RTOL = 1e-10


@dataclass(frozen=True)
class RankTolerance:
    """Threshold rule for deciding numerical rank.

    A singular value counts toward the rank when it exceeds
    ``relative_epsilon * max(rows, cols) * sigma_max + absolute_floor``.
    """

    relative_epsilon: float = 1e-12
    absolute_floor: float = 0.0

    def __post_init__(self):
        if not (self.relative_epsilon > 0.0):
            raise ValueError("relative_epsilon must be > 0")
        if self.absolute_floor < 0.0:
            raise ValueError("absolute_floor must be >= 0")

    def cutoff(self, shape, sigma_max):
        return self.relative_epsilon * max(shape) * sigma_max + self.absolute_floor


DEFAULT_TOL = RankTolerance()


def as_matrix(a, name="matrix", allow_empty=False):
    """Validate and return ``a`` as a finite 2-D float64 array."""
    A = np.asarray(a, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if A.size == 0 and not allow_empty:
        raise ValueError(f"{name} must not be empty")
    if A.size and not np.isfinite(A).all():
        raise ValueError(f"{name} contains non-finite entries")
    return A


def rank_from_singular_values(sigma, shape, tol=DEFAULT_TOL):
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.size == 0:
        return 0
    return int(np.count_nonzero(sigma > tol.cutoff(shape, sigma[0])))


def _fix_signs(V, partner=None, start=0):
    # Largest-magnitude entry of each column made positive; ties resolved by
    # the lowest index (np.argmax). Flipping a paired column keeps products
    # like U @ diag(s) @ V.T unchanged.
    for i in range(start, V.shape[1]):
        j = int(np.argmax(np.abs(V[:, i])))
        if V[j, i] < 0.0:
            V[:, i] = -V[:, i]
            if partner is not None and i < partner.shape[1]:
                partner[:, i] = -partner[:, i]
    return V


def svd(A, tol=DEFAULT_TOL):
    """Thin SVD ``A = U @ diag(sigma) @ V.T`` plus the numerical rank.

    Returns ``(U, sigma, V, rank)`` with orthonormal columns in U and V and
    ``sigma`` nonincreasing.
    """
    A = as_matrix(A, "A")
    U, sigma, Vh = np.linalg.svd(A, full_matrices=False)
    V = np.ascontiguousarray(Vh.T)
    U = np.ascontiguousarray(U)
    _fix_signs(U, partner=V)
    rank = rank_from_singular_values(sigma, A.shape, tol)
    return U, sigma, V, rank


def complete_orthogonal_decomposition(K, tol=DEFAULT_TOL):
    """Factor ``K`` as ``P @ [[R, 0], [0, 0]] @ Q.T`` with square orthogonal P, Q.

    R is r-by-r lower triangular and nonsingular, where r is the numerical
    rank of K; its singular values equal the nonzero singular values of K.
    Built from a column-pivoted QR of K followed by a second QR that
    compresses the leading r rows into a triangle. The rank is decided from
    the singular values of K (not from pivoted-QR diagonals), which makes it
    invariant under row and column permutations of K.

    Returns ``(P, Q, R, r)``.
    """
    K = as_matrix(K, "K")
    m, p = K.shape
    sigma = np.linalg.svd(K, compute_uv=False)
    r = rank_from_singular_values(sigma, K.shape, tol)
    if r == 0:
        return np.eye(m), np.eye(p), np.zeros((0, 0)), 0
    P, R1, piv = _backend.qr_pivoted(np.ascontiguousarray(K))
    T = R1[:r, :]
    Q2, R2 = _backend.qr_complete(np.ascontiguousarray(T.T))
    R = np.ascontiguousarray(R2[:r, :r].T)
    # K[:, piv] = P @ R1, so undo the pivoting on the right factor:
    # with Pi = I[:, piv], K = P [[T],[0]] Pi.T and Q = Pi @ Q2.
    Q = np.empty((p, p))
    Q[piv, :] = Q2
    return P, Q, R, r


def symmetric_eigen(S):
    """Eigendecomposition of a symmetric matrix, eigenvalues nonincreasing.

    S must be square and symmetric to within a 1e-10 relative tolerance; it
    is symmetrized as ``(S + S.T) / 2`` before the solve to absorb roundoff
    from accumulated matrix products. Returns ``(V, lam)`` with orthonormal
    columns in V and deterministic column signs.
    """
    S = as_matrix(S, "S")
    if S.shape[0] != S.shape[1]:
        raise ValueError(f"S must be square, got shape {S.shape}")
    scale = np.linalg.norm(S)
    asym = np.linalg.norm(S - S.T)
    if asym > _SYMMETRY_RTOL * max(scale, 1e-300):
        raise ValueError(
            f"S is not symmetric: relative asymmetry {asym / scale:.3e}"
        )
    Ssym = (S + S.T) / 2.0
    lam, V = np.linalg.eigh(Ssym)
    lam = lam[::-1].copy()
    V = np.ascontiguousarray(V[:, ::-1])
    _fix_signs(V)
    return V, lam


def pseudoinverse(A, tol=DEFAULT_TOL):
    """Moore-Penrose inverse via SVD with tolerance-based truncation."""
    A = as_matrix(A, "A")
    U, sigma, V, rank = svd(A, tol)
    if rank == 0:
        return np.zeros((A.shape[1], A.shape[0]))
    return (V[:, :rank] / sigma[:rank]) @ U[:, :rank].T


def inv_sqrt_spd(W, tol=DEFAULT_TOL):
    """Inverse symmetric square root of a positive definite matrix.

    Raises :class:`SingularScatterError` when the smallest eigenvalue falls
    at or below the relative tolerance, which is the signal for callers to
    switch from the classical eigenproblem route to the GSVD route.
    """
    V, lam = symmetric_eigen(W)
    lam_max = max(lam[0], 0.0)
    threshold = tol.relative_epsilon * lam_max + tol.absolute_floor
    if lam[-1] <= threshold:
        raise SingularScatterError(
            f"singular scatter: smallest eigenvalue {lam[-1]:.6e} is at or "
            f"below tolerance {threshold:.6e}"
        )
    Wis = (V / np.sqrt(lam)) @ V.T
    return (Wis + Wis.T) / 2.0

"""Paired factorization of a column-matched matrix pair (F, H).

``gsvd`` factors F = U C M^-1 and H = V S M^-1 with U, V square orthogonal,
M square nonsingular, and C, S block-diagonal matrices carrying paired
singular values (alpha_i, beta_i) with alpha_i^2 + beta_i^2 = 1. The rank
bookkeeping is r = rank([F; H]) and s = r - rank(H); entries with index
<= s have alpha = 1, beta = 0 exactly.

The construction follows the classical proof: complete orthogonal
decomposition of the stacked pair, an SVD of the top-left block of the
orthogonal factor, and a skew triangularization of the bottom-left block.
beta values are read off the triangularization rather than computed as
sqrt(1 - alpha^2), which would lose half the significant digits whenever
alpha is close to one.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CvaBiplotError, InternalConsistencyError
from .kernels import (
    DEFAULT_TOL,
    as_matrix,
    complete_orthogonal_decomposition,
    rank_from_singular_values,
)

_ORDER_SLACK = 1e-10


@dataclass(frozen=True)
class GsvdFactors:
    """Result bundle of the paired factorization.

    C and S are not stored densely; they are block-sparse and can be
    materialized on demand with :meth:`c_matrix` and :meth:`s_matrix`.
    ``r_condition`` estimates the condition number of the triangular core
    that was inverted to build M; values above 1e12 are worth flagging to
    the user but are not an error.
    """

    U: np.ndarray
    V: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    M: np.ndarray
    M_inv: np.ndarray
    r: int
    s: int
    m1: int
    m2: int
    p: int
    r_condition: float = 1.0

    def __post_init__(self):
        if not (0 <= self.s <= self.r):
            raise InternalConsistencyError(f"need 0 <= s <= r, got s={self.s} r={self.r}")
        if self.U.shape != (self.m1, self.m1) or self.V.shape != (self.m2, self.m2):
            raise InternalConsistencyError("U/V shapes do not match m1/m2")
        if self.M.shape != (self.p, self.p) or self.M_inv.shape != (self.p, self.p):
            raise InternalConsistencyError("M/M_inv must be p-by-p")
        if self.alpha.shape != (self.r,) or self.beta.shape != (self.r,):
            raise InternalConsistencyError("alpha/beta must have length r")
        a, b = self.alpha, self.beta
        if a.size:
            if np.any(a < -_ORDER_SLACK) or np.any(a > 1 + _ORDER_SLACK):
                raise InternalConsistencyError("alpha outside [0, 1]")
            if np.any(b < -_ORDER_SLACK) or np.any(b > 1 + _ORDER_SLACK):
                raise InternalConsistencyError("beta outside [0, 1]")
            if np.any(a[: self.s] != 1.0) or np.any(b[: self.s] != 0.0):
                raise InternalConsistencyError("leading s entries must be alpha=1, beta=0")
            tail_a = a[self.s :]
            tail_b = b[self.s :]
            if np.any(np.diff(tail_a) > _ORDER_SLACK):
                raise InternalConsistencyError("alpha must be nonincreasing past s")
            if np.any(np.diff(tail_b) < -_ORDER_SLACK):
                raise InternalConsistencyError("beta must be nondecreasing past s")

    def c_matrix(self):
        """Materialize C (m1-by-p): diag(alpha) in the leading r columns."""
        C = np.zeros((self.m1, self.p))
        k = min(self.r, self.m1)
        idx = np.arange(k)
        C[idx, idx] = self.alpha[:k]
        return C

    def s_matrix(self):
        """Materialize S (m2-by-p): the beta block for columns s..r-1.

        Rows follow the same block layout the factor V was arranged for:
        row j for column j when m2 >= r, bottom-aligned otherwise.
        """
        S = np.zeros((self.m2, self.p))
        cols = np.arange(self.s, self.r)
        offset = 0 if self.m2 >= self.r else self.m2 - self.r
        S[cols + offset, cols] = self.beta[self.s :]
        return S


def _skew_triangularize(A):
    # Orthogonal V with L = V.T @ A satisfying L[i, j] = 0 when
    # m - i > r - j (zeros above the bottom-right-aligned diagonal).
    # Equivalent to a QR factorization of A flipped in both directions.
    Af = np.ascontiguousarray(A[::-1, ::-1])
    Qf, Rf = _backend.qr_complete(Af)
    V = np.ascontiguousarray(Qf[::-1, ::-1])
    L = np.ascontiguousarray(Rf[::-1, ::-1])
    return V, L


def _paired_svd_signs(U, W, m1, r):
    # Deterministic signs: paired flips keep U @ Sigma @ W.T unchanged for
    # the leading min(m1, r) columns; unpaired columns flip freely.
    k = min(m1, r)
    for i in range(k):
        j = int(np.argmax(np.abs(U[:, i])))
        if U[j, i] < 0.0:
            U[:, i] = -U[:, i]
            W[:, i] = -W[:, i]
    for i in range(k, U.shape[1]):
        j = int(np.argmax(np.abs(U[:, i])))
        if U[j, i] < 0.0:
            U[:, i] = -U[:, i]
    for i in range(k, W.shape[1]):
        j = int(np.argmax(np.abs(W[:, i])))
        if W[j, i] < 0.0:
            W[:, i] = -W[:, i]


def gsvd(F, H, tol=DEFAULT_TOL):
    """Paired factorization of (F, H) sharing the right factor M.

    F and H must have the same column count p. Returns a
    :class:`GsvdFactors` with r = rank([F; H]) and s = r - rank(H) decided
    under ``tol``. Reconstruction identities F = U @ C @ M_inv and
    H = V @ S @ M_inv hold with C, S from the materialization methods.
    """
    F = as_matrix(F, "F")
    H = as_matrix(H, "H")
    m1, p = F.shape
    m2, p2 = H.shape
    if p != p2:
        raise ValueError(f"F and H must have equal column counts, got {p} and {p2}")

    K = np.vstack([F, H])
    P, Q, R, r = complete_orthogonal_decomposition(K, tol)
    if r == 0:
        return GsvdFactors(
            U=np.eye(m1), V=np.eye(m2),
            alpha=np.zeros(0), beta=np.zeros(0),
            M=np.eye(p), M_inv=np.eye(p),
            r=0, s=0, m1=m1, m2=m2, p=p, r_condition=1.0,
        )

    sig_h = np.linalg.svd(H, compute_uv=False)
    rank_h = rank_from_singular_values(sig_h, H.shape, tol)
    s = int(min(r, max(0, r - rank_h)))

    P11 = P[:m1, :r]
    P21 = P[m1:, :r]

    U, sig, Wh = np.linalg.svd(P11, full_matrices=True)
    U = np.ascontiguousarray(U)
    W = np.ascontiguousarray(Wh.T)
    _paired_svd_signs(U, W, m1, r)

    # Singular values of P11 below the rank cutoff are roundoff leakage
    # (rank(P11) equals rank(F)); zeroing them keeps a rank-deficient F
    # reconstructing exactly instead of to ~eps * |K|. P11 sits inside an
    # orthogonal matrix, so its spectrum has unit scale regardless of the
    # data; the cutoff is taken against 1, not against sig[0].
    if sig.size:
        sig = np.where(sig > tol.cutoff(P11.shape, 1.0), sig, 0.0)
    alpha = np.zeros(r)
    alpha[: sig.size] = np.clip(sig, 0.0, 1.0)
    alpha[:s] = 1.0

    V, L = _skew_triangularize(P21 @ W)
    beta = np.zeros(r)
    rows = np.arange(s, r) + (m2 - r)
    beta[s:] = np.clip(L[rows, np.arange(s, r)], 0.0, 1.0)
    beta[:s] = 0.0

    if m2 >= r:
        # Move the beta block from the bottom-aligned rows produced by the
        # triangularization up to rows s..r-1 (V columns permute along).
        perm = np.empty(m2, dtype=np.intp)
        perm[:s] = np.arange(s)
        perm[s:r] = np.arange(m2 - r + s, m2)
        perm[r:] = np.arange(s, m2 - r + s)
        V = np.ascontiguousarray(V[:, perm])

    WtR = W.T @ R
    M_inv = np.empty((p, p))
    M_inv[:r, :] = WtR @ Q[:, :r].T
    M_inv[r:, :] = Q[:, r:].T
    M = np.empty((p, p))
    M[:, :r] = Q[:, :r] @ np.linalg.solve(R, W)
    M[:, r:] = Q[:, r:]

    sig_r = np.linalg.svd(R, compute_uv=False)
    r_condition = float(sig_r[0] / sig_r[-1]) if sig_r[-1] > 0 else float("inf")

    return GsvdFactors(
        U=U, V=V, alpha=alpha, beta=beta, M=M, M_inv=M_inv,
        r=int(r), s=s, m1=m1, m2=m2, p=p, r_condition=r_condition,
    )


def generalized_eigenvalues(factors):
    """Eigenvalues alpha_i^2 / beta_i^2 for i = s..r-1, sorted nonincreasing.

    Returns ``(values, columns)`` where ``columns`` are the matching column
    indices into M. beta is positive on this index range by construction;
    a zero signals an internal inconsistency.
    """
    a = factors.alpha[factors.s :]
    b = factors.beta[factors.s :]
    if np.any(b <= 0.0):
        raise InternalConsistencyError(
            "beta must be positive for indices past s; factorization is inconsistent"
        )
    lam = (a * a) / (b * b)
    order = np.argsort(-lam, kind="stable")
    cols = factors.s + order
    return lam[order], cols.astype(np.intp)


def discriminant_columns(factors):
    """Columns s..r-1 of M ordered by descending generalized eigenvalue."""
    lam, cols = generalized_eigenvalues(factors)
    if cols.size == 0:
        raise CvaBiplotError("no discriminant directions")
    return np.ascontiguousarray(factors.M[:, cols])

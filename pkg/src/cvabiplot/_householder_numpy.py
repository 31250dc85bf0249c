"""Pure-numpy Householder kernels.

``qr_pivoted`` is the vectorized twin of the numba kernel in
:mod:`cvabiplot._householder_numba` (same algorithm, BLAS-backed outer
products instead of compiled loops); ``qr_complete`` wraps LAPACK and is
shared by both backends. Factors come back with a nonnegative R diagonal so
results are deterministic for a fixed input.
"""

import numpy as np


def _fix_diagonal_signs(Q, R):
    # flip rows of R / columns of Q so every diagonal entry of R is >= 0
    k = min(R.shape)
    d = np.diagonal(R)[:k]
    neg = np.flatnonzero(d < 0.0)
    for i in neg:
        R[i, i:] = -R[i, i:]
        Q[:, i] = -Q[:, i]
    return Q, R


def qr_pivoted(A):
    """Column-pivoted Householder QR: ``A[:, piv] = Q @ R``.

    Returns ``(Q, R, piv)`` with Q m-by-m orthogonal, R m-by-n upper
    triangular with nonincreasing diagonal magnitudes, and ``piv`` the
    column permutation. Pivot columns are chosen by largest remaining
    norm, recomputed exactly at every step (no downdating drift).
    """
    A = np.array(A, dtype=np.float64, order="C")
    m, n = A.shape
    R = A
    Q = np.eye(m)
    piv = np.arange(n)
    for k in range(min(m, n)):
        norms2 = np.einsum("ij,ij->j", R[k:, k:], R[k:, k:])
        jrel = int(np.argmax(norms2))
        best = norms2[jrel]
        if best <= 0.0:
            break
        j = k + jrel
        if j != k:
            R[:, [k, j]] = R[:, [j, k]]
            piv[[k, j]] = piv[[j, k]]
        x = R[k:, k]
        alpha = -np.copysign(np.sqrt(best), x[0])
        v = x.copy()
        v[0] -= alpha
        vtv = v @ v
        R[k, k] = alpha
        R[k + 1 :, k] = 0.0
        if vtv == 0.0:
            continue
        beta = 2.0 / vtv
        w = beta * (v @ R[k:, k + 1 :])
        R[k:, k + 1 :] -= np.outer(v, w)
        u = beta * (Q[:, k:] @ v)
        Q[:, k:] -= np.outer(u, v)
    Q, R = _fix_diagonal_signs(Q, R)
    return Q, R, piv


def qr_complete(A):
    """Unpivoted QR with the full square Q: ``A = Q @ R``."""
    A = np.asarray(A, dtype=np.float64)
    Q, R = np.linalg.qr(A, mode="complete")
    m, n = A.shape
    Rf = np.zeros((m, n))
    Rf[: R.shape[0], :] = R
    Q, Rf = _fix_diagonal_signs(np.ascontiguousarray(Q), Rf)
    return Q, Rf

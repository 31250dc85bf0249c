"""Numba-compiled column-pivoted Householder QR.

This is the one hot kernel with no LAPACK equivalent exposed through numpy:
rank-revealing QR with column pivoting, full Q, nonnegative diagonal. The
pure numpy twin lives in :mod:`cvabiplot._householder_numpy`; the env flag
``CVABIPLOT_BACKEND`` picks between them (see ``_backend``). Unpivoted
complete QR goes to LAPACK in both backends, which wins beyond toy sizes.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def qr_pivoted(A):
    """Column-pivoted Householder QR: ``A[:, piv] = Q @ R``.

    Same contract as the numpy twin: full Q, nonnegative R diagonal, pivot
    by largest remaining column norm recomputed exactly at each step.
    """
    m, n = A.shape
    R = A.copy()
    Q = np.eye(m)
    piv = np.arange(n)
    kmax = min(m, n)
    for k in range(kmax):
        best = -1.0
        jbest = k
        for j in range(k, n):
            s = 0.0
            for i in range(k, m):
                s += R[i, j] * R[i, j]
            if s > best:
                best = s
                jbest = j
        if best <= 0.0:
            break
        if jbest != k:
            for i in range(m):
                tmp = R[i, k]
                R[i, k] = R[i, jbest]
                R[i, jbest] = tmp
            t = piv[k]
            piv[k] = piv[jbest]
            piv[jbest] = t
        alpha = np.sqrt(best)
        if R[k, k] > 0.0:
            alpha = -alpha
        v0 = R[k, k] - alpha
        vtv = v0 * v0
        for i in range(k + 1, m):
            vtv += R[i, k] * R[i, k]
        if vtv == 0.0:
            R[k, k] = alpha
            continue
        beta = 2.0 / vtv
        # reflector stored as (v0, R[k+1:, k]); apply to R then to Q
        for j in range(k + 1, n):
            w = v0 * R[k, j]
            for i in range(k + 1, m):
                w += R[i, k] * R[i, j]
            w *= beta
            R[k, j] -= w * v0
            for i in range(k + 1, m):
                R[i, j] -= w * R[i, k]
        for i0 in range(m):
            u = Q[i0, k] * v0
            for i in range(k + 1, m):
                u += Q[i0, i] * R[i, k]
            u *= beta
            Q[i0, k] -= u * v0
            for i in range(k + 1, m):
                Q[i0, i] -= u * R[i, k]
        R[k, k] = alpha
        for i in range(k + 1, m):
            R[i, k] = 0.0
    for i in range(kmax):
        if R[i, i] < 0.0:
            for j in range(i, n):
                R[i, j] = -R[i, j]
            for i0 in range(m):
                Q[i0, i] = -Q[i0, i]
    return Q, R, piv

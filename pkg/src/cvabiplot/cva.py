"""Canonical variate analysis by two routes.

``fit_standard`` solves the classical two-sided eigenproblem B l = lambda W l
through the symmetric form W^{-1/2} B W^{-1/2}; it needs n > p and a
nonsingular within-group scatter W. ``fit_gsvd`` reaches the same canonical
space through the paired factorization of (F, H), where F stacks group means
and H holds within-group deviations, and stays valid when p exceeds n.

For standardized data the two routes produce the same scores up to
per-column sign, which the test suite exercises as a cross-check of both.
"""

import warnings as _warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularScatterError
from .gsvd import discriminant_columns, gsvd
from .kernels import (
    DEFAULT_TOL,
    as_matrix,
    inv_sqrt_spd,
    pseudoinverse,
    symmetric_eigen,
)

# Eigenvalues below this relative threshold carry no group separation.
_EIG_SIGNIFICANCE = 1e-8


@dataclass(frozen=True)
class Dataset:
    """An n-by-p observation matrix with variable names and group labels."""

    X: np.ndarray
    variable_names: tuple
    group_labels: tuple

    def __post_init__(self):
        X = as_matrix(self.X, "X")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "variable_names", tuple(self.variable_names))
        object.__setattr__(self, "group_labels", tuple(str(g) for g in self.group_labels))
        n, p = X.shape
        if n < 2:
            raise ValueError("need at least 2 observations")
        if len(self.variable_names) != p:
            raise ValueError(f"expected {p} variable names, got {len(self.variable_names)}")
        if len(self.group_labels) != n:
            raise ValueError(f"expected {n} group labels, got {len(self.group_labels)}")
        if len(set(self.group_labels)) < 2:
            raise ValueError("need at least 2 distinct groups")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class GroupStructure:
    """Zero/one indicator matrix G (n-by-K) plus group names and sizes."""

    G: np.ndarray
    group_names: tuple
    counts: np.ndarray

    @property
    def k(self):
        return len(self.group_names)


@dataclass(frozen=True)
class StandardizationParams:
    """Per-column location/scale recorded so axes can be de-standardized."""

    means: np.ndarray
    sds: np.ndarray


@dataclass(frozen=True)
class CvaModel:
    """Fitted canonical basis, scores and the scatter pair that produced it.

    ``basis`` maps standardized observations to canonical scores;
    ``axis_matrix`` maps canonical scores back to standardized variables
    (the exact inverse on the standard path, a Moore-Penrose inverse on the
    GSVD path). ``r`` and ``s`` carry the rank bookkeeping of the GSVD path
    (on the standard path r = q and s = 0 by convention).
    """

    path: str
    basis: np.ndarray
    axis_matrix: np.ndarray
    eigenvalues: np.ndarray
    group_means_scores: np.ndarray
    training_scores: np.ndarray
    standardization: StandardizationParams
    group_structure: GroupStructure
    B_used: np.ndarray
    W_used: np.ndarray
    r: int
    s: int
    warnings: tuple = field(default_factory=tuple)

    @property
    def q(self):
        return self.basis.shape[1]

    @property
    def p(self):
        return self.basis.shape[0]


def standardize(X, names=None):
    """Center to mean 0 and scale to sample standard deviation 1 (ddof=1).

    Returns ``(Xs, params)``. A constant column cannot be scaled and raises
    a ValueError naming the variable.
    """
    X = as_matrix(X, "X")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows to standardize")
    means = X.mean(axis=0)
    sds = X.std(axis=0, ddof=1)
    bad = np.flatnonzero(sds == 0.0)
    if bad.size:
        j = int(bad[0])
        name = names[j] if names is not None else f"column {j}"
        raise ValueError(f"constant column cannot be standardized: {name}")
    Xs = (X - means) / sds
    return Xs, StandardizationParams(means=means, sds=sds)


def center_only(X):
    """Center columns without rescaling (sds recorded as ones)."""
    X = as_matrix(X, "X")
    means = X.mean(axis=0)
    return X - means, StandardizationParams(means=means, sds=np.ones(X.shape[1]))


def group_indicator(labels):
    """Indicator matrix with groups ordered by first appearance."""
    labels = [str(v) for v in labels]
    names = []
    index = {}
    for v in labels:
        if v not in index:
            index[v] = len(names)
            names.append(v)
    if len(names) < 2:
        raise ValueError("need at least 2 distinct groups")
    n, k = len(labels), len(names)
    G = np.zeros((n, k))
    rows = np.arange(n)
    cols = np.array([index[v] for v in labels])
    G[rows, cols] = 1.0
    counts = G.sum(axis=0).astype(np.intp)
    return GroupStructure(G=G, group_names=tuple(names), counts=counts)


def group_means(Xs, gs):
    """Per-group mean rows: (G'G)^-1 G' X."""
    return (gs.G.T @ Xs) / gs.counts[:, None]


def scatter_matrices(Xs, gs):
    """Between-group B and within-group W scatter (both p-by-p, symmetrized).

    B carries the group means as given, so for it to measure between-group
    variation the columns of Xs must already be centered; W is built from
    explicit deviations and does not depend on centering.
    """
    Xbar = group_means(Xs, gs)
    B = Xbar.T @ (gs.counts[:, None] * Xbar)
    D = Xs - gs.G @ Xbar
    W = D.T @ D
    return (B + B.T) / 2.0, (W + W.T) / 2.0


def build_FH(Xs, gs):
    """The stacked pair: F = G Xbar (means) and H = Xs - F (deviations).

    F'F equals B, H'H equals W, and F + H = Xs exactly.
    """
    F = gs.G @ group_means(Xs, gs)
    H = Xs - F
    return F, H


def _singleton_warnings(gs):
    singles = [name for name, c in zip(gs.group_names, gs.counts) if c == 1]
    if singles:
        msg = f"singleton groups contribute no within-group scatter: {', '.join(singles)}"
        _warnings.warn(msg, stacklevel=3)
        return (msg,)
    return ()


def _prepare(ds, standardize_columns):
    if standardize_columns:
        Xs, params = standardize(ds.X, ds.variable_names)
    else:
        Xs, params = center_only(ds.X)
    gs = group_indicator(ds.group_labels)
    return Xs, params, gs


def fit_standard(ds, standardize_columns=True, tol=DEFAULT_TOL):
    """Classical route: eigenvectors of W^{-1/2} B W^{-1/2}, basis W^{-1/2} V.

    Requires n > p with nonsingular W; otherwise raises
    :class:`SingularScatterError` pointing at the GSVD route. When
    ``standardize_columns`` is off the columns are still centered, which the
    between-group scatter formula needs; only the rescaling is skipped.
    """
    n, p = ds.X.shape
    if n <= p:
        raise SingularScatterError("singular scatter: use gsvd path")
    Xs, params, gs = _prepare(ds, standardize_columns)
    warn = _singleton_warnings(gs)
    B, W = scatter_matrices(Xs, gs)
    try:
        W_half_inv = inv_sqrt_spd(W, tol)
    except SingularScatterError as exc:
        raise SingularScatterError("singular scatter: use gsvd path") from exc
    V, lam = symmetric_eigen(W_half_inv @ B @ W_half_inv)
    L = W_half_inv @ V
    # The generalized eigenvalues are dimensionless, so an absolute cutoff
    # separates real group separation from roundoff zeros.
    significant = int(np.count_nonzero(lam > _EIG_SIGNIFICANCE))
    q = min(p, max(significant, 2))
    basis = np.ascontiguousarray(L[:, :q])
    axis_matrix = np.ascontiguousarray(np.linalg.inv(L)[:q, :])
    Xbar = group_means(Xs, gs)
    return CvaModel(
        path="standard",
        basis=basis,
        axis_matrix=axis_matrix,
        eigenvalues=lam[:q].copy(),
        group_means_scores=Xbar @ basis,
        training_scores=Xs @ basis,
        standardization=params,
        group_structure=gs,
        B_used=B,
        W_used=W,
        r=q,
        s=0,
        warnings=warn,
    )


def fit_gsvd(ds, tol=DEFAULT_TOL):
    """GSVD route, valid for any n and p; columns are always standardized.

    Pipeline: standardize, build (F, H), factor them, project onto the
    discriminant columns of M, then solve the reduced q-by-q problem whose
    within-group scatter is nonsingular. The reduced eigensolve reproduces
    the generalized-value ratios alpha^2 / beta^2.
    """
    Xs, params, gs = _prepare(ds, standardize_columns=True)
    warn = _singleton_warnings(gs)
    F, H = build_FH(Xs, gs)
    factors = gsvd(F, H, tol)
    if factors.r_condition > 1e12:
        warn = warn + (
            f"triangular core is ill conditioned (cond ~ {factors.r_condition:.3e}); "
            "results may lose accuracy",
        )
    M_cols = discriminant_columns(factors)
    Z = Xs @ M_cols
    B_g, W_g = scatter_matrices(Z, gs)
    try:
        Wg_half_inv = inv_sqrt_spd(W_g, tol)
    except SingularScatterError as exc:
        lam_w = np.linalg.eigvalsh(W_g)
        raise SingularScatterError(
            "singular scatter in the reduced space: raise the rank tolerance or "
            f"remove singleton groups (reduced within-group eigenvalues span "
            f"[{lam_w[0]:.3e}, {lam_w[-1]:.3e}], q={M_cols.shape[1]}, "
            f"n={ds.n}, K={gs.k})"
        ) from exc
    V2, lam = symmetric_eigen(Wg_half_inv @ B_g @ Wg_half_inv)
    L_g = Wg_half_inv @ V2
    basis = np.ascontiguousarray(M_cols @ L_g)
    axis_matrix = pseudoinverse(basis, tol)
    Xbar = group_means(Xs, gs)
    return CvaModel(
        path="gsvd",
        basis=basis,
        axis_matrix=axis_matrix,
        eigenvalues=lam.copy(),
        group_means_scores=Xbar @ basis,
        training_scores=Xs @ basis,
        standardization=params,
        group_structure=gs,
        B_used=B_g,
        W_used=W_g,
        r=factors.r,
        s=factors.s,
        warnings=warn,
    )


def scores(model, Xnew):
    """Canonical scores for rows given in original measurement units."""
    Xnew = as_matrix(Xnew, "Xnew")
    if Xnew.shape[1] != model.p:
        raise ValueError(
            f"expected {model.p} columns, got {Xnew.shape[1]}"
        )
    Z = (Xnew - model.standardization.means) / model.standardization.sds
    return Z @ model.basis


def cluster_quality(model):
    """trace(W^-1 B) for the scatter pair the fitted path actually used."""
    return float(np.trace(np.linalg.solve(model.W_used, model.B_used)))

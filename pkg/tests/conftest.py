"""Shared generators and fixture-file helpers."""

import os

import numpy as np
import pytest

from cvabiplot import Dataset


def make_dataset(n, p, k, seed=0, sep=2.5):
    """Random grouped dataset with controllable group separation."""
    rng = np.random.default_rng(seed)
    labels = tuple(f"g{i % k}" for i in range(n))
    X = rng.standard_normal((n, p))
    centers = rng.standard_normal((k, p)) * sep
    for i, lab in enumerate(labels):
        X[i] += centers[int(lab[1:])]
    names = tuple(f"v{j}" for j in range(p))
    return Dataset(X=X, variable_names=names, group_labels=labels)


def random_pair(rng, m1, m2, p, rank_f=None, rank_h=None):
    """Random (F, H) pair; ranks below min dims produce exact deficiencies."""
    if rank_f is None:
        F = rng.standard_normal((m1, p))
    else:
        F = rng.standard_normal((m1, rank_f)) @ rng.standard_normal((rank_f, p))
    if rank_h is None:
        H = rng.standard_normal((m2, p))
    else:
        H = rng.standard_normal((m2, rank_h)) @ rng.standard_normal((rank_h, p))
    return F, H


def data_dir():
    return os.environ.get(
        "CVABIPLOT_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "data")
    )


def fixture_path(name):
    return os.path.join(data_dir(), name)


def require_fixture(name):
    path = fixture_path(name)
    if not os.path.exists(path):
        pytest.skip(f"dataset fixture {name} not present under {data_dir()}")
    return path


@pytest.fixture(params=["active"])
def backend_impls(request):
    """Both Householder kernel implementations, for cross-checking."""
    from cvabiplot import _householder_numpy as impl_numpy

    impls = {"numpy": impl_numpy}
    try:
        from cvabiplot import _householder_numba as impl_numba

        impls["numba"] = impl_numba
    except ImportError:
        pass
    return impls


def rowspace_pencil_oracle(ds):
    """Independent cluster-quality oracle for the wide-data route.

    Solves the (B, B + W) pencil inside the row space of the standardized
    data, using only SVD and a symmetric eigensolve. Returns the sum of
    finite generalized eigenvalues and the count of infinite ones
    (directions with zero within-group variation).
    """
    from cvabiplot import (
        group_indicator,
        scatter_matrices,
        standardize,
        symmetric_eigen,
    )

    Xs, _ = standardize(ds.X)
    gs = group_indicator(ds.group_labels)
    _, sig, Vt = np.linalg.svd(Xs, full_matrices=False)
    rho = int((sig > 1e-12 * max(Xs.shape) * sig[0]).sum())
    T = Xs @ Vt[:rho].T
    Bt, Wt = scatter_matrices(T, gs)
    Vtot, lam_tot = symmetric_eigen(Bt + Wt)
    half = (Vtot / np.sqrt(lam_tot)) @ Vtot.T
    theta = np.sort(np.linalg.eigvalsh(half @ Bt @ half))[::-1]
    finite = theta[theta < 1.0 - 1e-9]
    return float((finite / (1.0 - finite)).sum()), int((theta >= 1.0 - 1e-9).sum())


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return path


def dataset_to_csv(path, ds, group_col="group", fmt="{:.12g}"):
    header = [group_col] + list(ds.variable_names)
    rows = []
    for lab, xrow in zip(ds.group_labels, ds.X):
        rows.append([lab] + [fmt.format(v) for v in xrow])
    return write_csv(path, header, rows)

"""Biplot geometry: sample points, group means, calibrated variable axes.

The plotted plane is spanned by the first two canonical dimensions. Each
variable gets an axis through the origin whose marker points predict
original-unit values via inner products: the marker for value mu sits at
(mu_std / |d|^2) * d, where d is the 2-D projection of the variable's
column of the back-transformation (axis) matrix and mu_std is the
standardized image of mu. Markers are chosen from a 1-2-5 ladder of round
numbers in original units.
"""

import math
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

# A variable whose axis direction has (relatively) no component in the
# plotted plane cannot be calibrated there.
_PROJECTION_FLOOR = 1e-12


@dataclass(frozen=True)
class MarkerPoint:
    """A calibrated tick: original-unit value and its 2-D position."""

    value: float
    position: np.ndarray


@dataclass(frozen=True)
class CalibratedAxis:
    variable: int
    name: str
    direction: np.ndarray
    markers: tuple
    plottable: bool = True


@dataclass(frozen=True)
class BiplotLayout:
    """Everything a renderer needs, in canonical (equal-scale) coordinates."""

    points: np.ndarray
    point_groups: np.ndarray
    group_names: tuple
    group_mean_points: np.ndarray
    axes: tuple
    eigenvalue_share: float
    degenerate: bool
    bounds: tuple


def _grid_bounds(lo, hi, step):
    # integer grid indices whose values bracket [lo, hi]; the while loops
    # absorb one-ulp rounding of floor(lo/step) * step past lo
    ilo = math.floor(lo / step)
    ihi = math.ceil(hi / step)
    while ilo * step > lo:
        ilo -= 1
    while ihi * step < hi:
        ihi += 1
    return ilo, ihi


def nice_markers(data_range, target_count=5):
    """Round numbers from the 1-2-5 ladder spanning ``data_range``.

    Returns between 3 and 2 * target_count ascending values whose first and
    last bracket the range. A degenerate range yields the single value.
    """
    lo, hi = float(data_range[0]), float(data_range[1])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("marker range must be finite")
    if lo > hi:
        raise ValueError("marker range must have lo <= hi")
    # a span below ~1e-12 of the offset magnitude cannot carry distinct
    # round markers in float64; treat it as a constant column
    if hi - lo <= 1e-12 * max(abs(lo), abs(hi)):
        return [lo]
    target = max(int(target_count), 1)
    span = hi - lo
    exp0 = math.floor(math.log10(span / (2.0 * target)))
    ladder = [b * 10.0 ** e for e in range(exp0 - 1, exp0 + 5) for b in (1.0, 2.0, 5.0)]
    chosen = None
    for pos, step in enumerate(ladder):
        ilo, ihi = _grid_bounds(lo, hi, step)
        count = ihi - ilo + 1
        if count <= 2 * target:
            chosen = (step, ilo, ihi)
            if count >= 3:
                break
            # too coarse: fall back to the previous (finer) rung
            prev = ladder[pos - 1]
            ilo, ihi = _grid_bounds(lo, hi, prev)
            chosen = (prev, ilo, ihi)
            break
    if chosen is None:
        step = ladder[-1]
        chosen = (step, *_grid_bounds(lo, hi, step))
    step, ilo, ihi = chosen
    return [i * step for i in range(ilo, ihi + 1)]


def _plane_projection(model, i):
    d = np.array(model.axis_matrix[:2, i], dtype=np.float64)
    if d.shape[0] < 2:
        d = np.concatenate([d, np.zeros(2 - d.shape[0])])
    return d


def calibrate_axis(model, i, values, name=None):
    """Calibrated axis for variable ``i`` with markers at ``values``.

    Values are in original units; they are standardized with the model's
    parameters before the linear calibration formula places them. Marker
    positions are collinear through the origin by construction. A variable
    orthogonal to the plotted plane comes back flagged unplottable with no
    markers.
    """
    p = model.p
    if not (0 <= i < p):
        raise ValueError(f"variable index {i} out of range for p={p}")
    d = _plane_projection(model, i)
    nrm2 = float(d @ d)
    scale = float(np.abs(model.axis_matrix[:2, :]).max()) if model.axis_matrix.size else 0.0
    if nrm2 <= (_PROJECTION_FLOOR * max(scale, 1.0)) ** 2:
        return CalibratedAxis(
            variable=i, name=name, direction=np.zeros(2), markers=(), plottable=False
        )
    mean_i = model.standardization.means[i]
    sd_i = model.standardization.sds[i]
    markers = []
    for value in values:
        mu = (float(value) - mean_i) / sd_i
        pos = (mu / nrm2) * d
        markers.append(MarkerPoint(value=float(value), position=pos))
    return CalibratedAxis(
        variable=i,
        name=name,
        direction=d / math.sqrt(nrm2),
        markers=tuple(markers),
        plottable=True,
    )


def select_variables(model, k):
    """Rank variables by the length of their axis direction in the plane.

    Returns the indices of the k longest 2-D projections, the default
    display heuristic when p is too large to draw every axis. k is clamped
    to p with a warning.
    """
    p = model.p
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > p:
        _warnings.warn(f"k={k} exceeds p={p}; clamping", stacklevel=2)
        k = p
    lengths = np.linalg.norm(model.axis_matrix[:2, :], axis=0)
    order = np.argsort(-lengths, kind="stable")
    return [int(j) for j in order[:k]]


def _two_dim(S):
    out = np.zeros((S.shape[0], 2))
    cols = min(2, S.shape[1])
    out[:, :cols] = S[:, :cols]
    return out


def layout(model, ds, marker_target=5):
    """Full biplot layout for a fitted model and its training dataset."""
    pts = _two_dim(model.training_scores)
    mean_pts = _two_dim(model.group_means_scores)
    degenerate = model.q < 2

    lam = model.eigenvalues
    total = float(np.sum(np.clip(lam, 0.0, None)))
    plotted = float(np.sum(np.clip(lam[:2], 0.0, None)))
    share = 1.0 if total <= 0.0 else min(plotted / total, 1.0)

    axes = []
    for i in range(ds.p):
        col = ds.X[:, i]
        values = nice_markers((float(col.min()), float(col.max())), marker_target)
        axes.append(calibrate_axis(model, i, values, name=ds.variable_names[i]))

    gs = model.group_structure
    point_groups = np.argmax(gs.G, axis=1).astype(np.intp)

    # data bounding box plus 5% margin; axes and markers are clipped to it
    # at render time rather than inflating it
    world = np.vstack([pts, mean_pts, np.zeros((1, 2))])
    xmin, ymin = world.min(axis=0)
    xmax, ymax = world.max(axis=0)
    margin = 0.05 * max(xmax - xmin, ymax - ymin, 1e-30)
    bounds = (
        float(xmin - margin),
        float(xmax + margin),
        float(ymin - margin),
        float(ymax + margin),
    )

    return BiplotLayout(
        points=pts,
        point_groups=point_groups,
        group_names=gs.group_names,
        group_mean_points=mean_pts,
        axes=tuple(axes),
        eigenvalue_share=share,
        degenerate=degenerate,
        bounds=bounds,
    )

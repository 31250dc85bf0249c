"""Canonical variate analysis biplots.

Fits CVA by the classical eigenproblem route and by a GSVD route that stays
valid when the number of variables exceeds the number of observations, and
turns fitted models into calibrated biplot geometry and SVG/CSV/JSON
artifacts.
"""

from ._backend import BACKEND
from .biplot import (
    BiplotLayout,
    CalibratedAxis,
    MarkerPoint,
    calibrate_axis,
    layout,
    nice_markers,
    select_variables,
)
from .cva import (
    CvaModel,
    Dataset,
    GroupStructure,
    StandardizationParams,
    build_FH,
    center_only,
    cluster_quality,
    fit_gsvd,
    fit_standard,
    group_indicator,
    group_means,
    scatter_matrices,
    scores,
    standardize,
)
from .errors import (
    ConfigError,
    CvaBiplotError,
    DataFileError,
    InternalConsistencyError,
    SingularScatterError,
)
from .gsvd import GsvdFactors, discriminant_columns, generalized_eigenvalues, gsvd
from .kernels import (
    DEFAULT_TOL,
    RankTolerance,
    complete_orthogonal_decomposition,
    inv_sqrt_spd,
    pseudoinverse,
    svd,
    symmetric_eigen,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BiplotLayout",
    "CalibratedAxis",
    "ConfigError",
    "CvaBiplotError",
    "CvaModel",
    "DataFileError",
    "Dataset",
    "DEFAULT_TOL",
    "GroupStructure",
    "GsvdFactors",
    "InternalConsistencyError",
    "MarkerPoint",
    "RankTolerance",
    "SingularScatterError",
    "StandardizationParams",
    "build_FH",
    "calibrate_axis",
    "center_only",
    "cluster_quality",
    "complete_orthogonal_decomposition",
    "discriminant_columns",
    "fit_gsvd",
    "fit_standard",
    "generalized_eigenvalues",
    "group_indicator",
    "group_means",
    "gsvd",
    "inv_sqrt_spd",
    "layout",
    "nice_markers",
    "pseudoinverse",
    "scatter_matrices",
    "scores",
    "select_variables",
    "standardize",
    "svd",
    "symmetric_eigen",
]

"""Householder kernel backend selection.

The column-pivoted QR exists twice: numba-compiled loops and a pure numpy
implementation. ``CVABIPLOT_BACKEND`` picks one at import time:

* ``auto`` (default): numba when importable, numpy otherwise
* ``numba``: require the compiled kernel, raise if numba is missing
* ``numpy``: force the pure numpy path

Unpivoted complete QR always delegates to LAPACK, which is faster than
hand-rolled loops at every non-toy size. ``benchmarks/bench_backends.py``
compares the two pivoted-QR kernels.
"""

import os
import warnings

from ._householder_numpy import qr_complete

_requested = os.environ.get("CVABIPLOT_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    warnings.warn(
        f"unknown CVABIPLOT_BACKEND={_requested!r}; falling back to 'auto'",
        stacklevel=1,
    )
    _requested = "auto"

if _requested == "numpy":
    from ._householder_numpy import qr_pivoted

    BACKEND = "numpy"
else:
    try:
        from ._householder_numba import qr_pivoted

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from ._householder_numpy import qr_pivoted

        BACKEND = "numpy"

__all__ = ["BACKEND", "qr_complete", "qr_pivoted"]

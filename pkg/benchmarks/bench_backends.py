"""Benchmark the numba kernels against the pure-numpy fallback.

The backend is fixed per process at import time, so each backend runs in a
subprocess with CVABIPLOT_BACKEND set. Timings cover the column-pivoted QR
(the hot kernel), the complete orthogonal decomposition built on it, and a
full paired factorization of a stacked (F, H) pair.

Usage: python benchmarks/bench_backends.py [--repeats 3]
"""

import argparse
import json
import os
import subprocess
import sys

CASES = [
    # (m1, m2, p) of the stacked pair
    (30, 30, 20),
    (60, 60, 40),
    (60, 60, 500),
    (60, 60, 2000),
    (200, 200, 120),
]

_INNER = r"""
import json, os, sys, time
import numpy as np
from cvabiplot import _backend, complete_orthogonal_decomposition, gsvd

cases = json.loads(sys.argv[1])
repeats = int(sys.argv[2])
rng = np.random.default_rng(0)

# warm the JIT cache outside the timed region
_backend.qr_pivoted(np.eye(3))
_backend.qr_complete(np.eye(3))

rows = []
for m1, m2, p in cases:
    F = rng.standard_normal((m1, p))
    H = rng.standard_normal((m2, p))
    K = np.vstack([F, H])
    t_qr = t_cod = t_gsvd = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        _backend.qr_pivoted(np.ascontiguousarray(K))
        t_qr = min(t_qr, time.perf_counter() - t0)
        t0 = time.perf_counter()
        complete_orthogonal_decomposition(K)
        t_cod = min(t_cod, time.perf_counter() - t0)
        t0 = time.perf_counter()
        gsvd(F, H)
        t_gsvd = min(t_gsvd, time.perf_counter() - t0)
    rows.append({"case": [m1, m2, p], "qr": t_qr, "cod": t_cod, "gsvd": t_gsvd})
print(json.dumps({"backend": _backend.BACKEND, "rows": rows}))
"""


def run_backend(backend, repeats):
    env = dict(os.environ, CVABIPLOT_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", _INNER, json.dumps(CASES), str(repeats)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    results = {}
    for backend in ("numpy", "numba"):
        try:
            results[backend] = run_backend(backend, args.repeats)
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: failed ({exc.stderr.strip().splitlines()[-1]})")
    if "numba" not in results:
        print("numba backend unavailable; nothing to compare")
        return

    print(f"{'case (m1,m2,p)':>18} {'kernel':>6} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for i, case in enumerate(CASES):
        for kernel in ("qr", "cod", "gsvd"):
            t_np = results["numpy"]["rows"][i][kernel]
            t_nb = results["numba"]["rows"][i][kernel]
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(
                f"{str(case):>18} {kernel:>6} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
                f"{ratio:>7.2f}x"
            )


if __name__ == "__main__":
    main()

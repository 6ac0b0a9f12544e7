"""Compiled kernel vs pure-Python engine on the same integrals.

    python3 benchmarks/bench_kernels.py [--points 200] [--repeat 3]

Prints seconds per grid for each backend, the speed-up, and the largest
difference between the two backends' values.
"""

from __future__ import annotations

import argparse
import time
import warnings

import numpy as np

import fracops as fo
from fracops.operators import OperatorSpec, grid_eval

CASES = [
    ("lw_plus a=0.5 gaussian", OperatorSpec("lw_plus", 0.5), fo.gaussian(1.0)),
    ("riesz a=1.2 lorentzian", OperatorSpec("riesz", 1.2), fo.lorentzian(1.0)),
    ("feller a=0.7 t=0.3 cosine", OperatorSpec("feller", 0.7, theta=0.3), fo.cosine(1.5)),
    ("central k=3 a=1.8 gaussian", OperatorSpec("central", 1.8, k=3), fo.gaussian(1.0)),
    ("central k=4 a=2.4 gaussian", OperatorSpec("central", 2.4, k=4), fo.gaussian(1.0)),
]


def _time(spec, f, grid, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = grid_eval(spec, f, grid)
        best = min(best, time.perf_counter() - t0)
    return best, np.array(res.values)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if not fo.HAVE_EXTENSION:
        print("compiled extension not built; nothing to compare")
        return 1
    grid = np.linspace(-5.0, 5.0, args.points)
    print(f"{'case':30s} {'compiled s':>11s} {'python s':>10s} {'speed-up':>9s} "
          f"{'max |diff|':>11s}")
    warnings.simplefilter("ignore", fo.QuadratureWarning)
    for name, spec, f in CASES:
        with fo.backend("compiled"):
            tc, vc = _time(spec, f, grid, args.repeat)
        with fo.backend("python"):
            tp, vp = _time(spec, f, grid, args.repeat)
        diff = float(np.max(np.abs(vc - vp)))
        print(f"{name:30s} {tc:11.4f} {tp:10.4f} {tp / tc:8.1f}x {diff:11.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

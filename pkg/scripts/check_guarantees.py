"""Print the convergence diagnostics on certified small instances.

Builds 20 x 24 matrices whose reachable columns are nearly orthonormal,
certifies the weighted isometry constant of order 3s by enumeration, runs
IHWT and reports the error bound, the per-step contraction and the descent
checks (with the surrogate as written and with its halved scaling).
"""
import sys

import numpy as np

from ihwt.core import WeightVector
from ihwt.diagnostics import contraction_report, descent_diagnostics, theorem_bound
from ihwt.sensing import gaussian_matrix, rip_constant
from ihwt.solvers import SolverConfig, ihwt
from ihwt.thresholding import exact_weighted_threshold


def instance(seed, eps=0.03):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((20, 20)))
    a = np.empty((20, 24))
    a[:, :16] = q[:, :16] + eps * rng.standard_normal((20, 16)) / np.sqrt(20)
    tail = rng.standard_normal((20, 8))
    a[:, 16:] = tail / np.linalg.norm(tail, axis=0)
    w2 = np.concatenate([rng.choice([1, 2], 16), np.full(8, 100)])
    return a, WeightVector(np.sqrt(w2))


def main(n_instances=10):
    print("seed  delta_3s  bound  max_ratio  iters")
    for seed in range(n_instances):
        a, w = instance(seed)
        delta = rip_constant(a, w, 9).delta
        rng = np.random.default_rng(100 + seed)
        x = rng.standard_normal(24) * 0.5 ** np.arange(24)
        e = 0.01 * rng.standard_normal(20)
        xb = exact_weighted_threshold(x, w, 3)
        tr = ihwt(a, a @ x + e, w, 3, SolverConfig(max_iters=100))
        bound = theorem_bound(tr, a, x, xb, e, delta, w, 3)
        ratio = contraction_report(tr, a, x, xb, e, delta).max_ratio
        print(f"{seed:4d}  {delta:8.4f}  {str(bound.satisfied):5s}  {ratio:9.4f}  {tr.iterations:5d}")

    print("\nseed  monotone  summable  interleaved(as written)  interleaved(halved)")
    for seed in range(n_instances):
        rng = np.random.default_rng(seed)
        a = gaussian_matrix(30, 60, seed, "spectral", 0.95)
        w = WeightVector(np.sqrt(rng.choice([1, 4, 9], 60)))
        y = rng.standard_normal(30)
        tr = ihwt(a, y, w, 10)
        lit = descent_diagnostics(tr, a, y, spec_norm=0.95)
        half = descent_diagnostics(tr, a, y, spec_norm=0.95, halved=True)
        print(f"{seed:4d}  {str(lit.monotone):8s}  {str(lit.summable):8s}  "
              f"{str(lit.interleaved):22s}  {half.interleaved}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

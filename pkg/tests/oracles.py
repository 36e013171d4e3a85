"""Independent reference implementations used as test oracles.

None of these share code with the package: they brute-force over
``itertools`` subsets or use a different counting identity.
"""
import itertools
import math

import numpy as np


def all_subsets(n):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def feasible_subsets(w2, s):
    """All index tuples with sum of w2 <= s (plain float sums, tiny slack)."""
    for sub in all_subsets(len(w2)):
        if sum(w2[j] for j in sub) <= s + 1e-9:
            yield sub


def brute_projection_energy(x, w2, s):
    """Largest captured energy sum x_j^2 over feasible supports."""
    return max(sum(float(x[j]) ** 2 for j in sub) for sub in feasible_subsets(w2, s))


def brute_projection_error(x, w2, s):
    total = float(np.sum(np.asarray(x, dtype=float) ** 2))
    return math.sqrt(max(total - brute_projection_energy(x, w2, s), 0.0))


def distinct_partitions_product(n):
    """Coefficient of q^n in prod_{k>=1} (1 + q^k), by polynomial products."""
    poly = [1] + [0] * n
    for k in range(1, n + 1):
        for t in range(n, k - 1, -1):
            poly[t] += poly[t - k]
    return poly[n]


def brute_rip(a, w2, s):
    """max over all feasible nonempty supports of the extreme singular-value gaps."""
    delta = 0.0
    for sub in feasible_subsets(w2, s):
        if not sub:
            continue
        sv = np.linalg.svd(a[:, list(sub)], compute_uv=False)
        delta = max(delta, sv[0] ** 2 - 1.0, 1.0 - sv[-1] ** 2)
    return delta

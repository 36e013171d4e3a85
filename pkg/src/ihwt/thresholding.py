"""Projections onto sparse and weighted-sparse vectors.

Every operator breaks ties toward the lowest index, so the weighted
operators collapse bit-for-bit onto ``hard_threshold`` when all weights are
one.
"""
import numpy as np

from .combinatorics import (
    MAX_ENUMERATION,
    enumerate_supports,
    integer_capacity,
    within_budget,
)
from .core import (
    DimensionError,
    EnumerationLimitError,
    UnsupportedWeightsError,
    as_signal,
    as_weights,
)

__all__ = [
    "PROJECTION_MODES",
    "hard_threshold",
    "hard_threshold_support",
    "exact_weighted_threshold",
    "exact_weighted_support",
    "surrogate_weighted_threshold",
    "surrogate_weighted_support",
    "weighted_threshold",
    "projection_error",
    "exact_squares",
    "support_energy",
]

PROJECTION_MODES = ("exact_dp", "exact_enum", "surrogate")


def _keep(x, support):
    out = np.zeros_like(x)
    out[support] = x[support]
    return out


def hard_threshold_support(x, s):
    x = as_signal(x)
    s = int(s)
    if not 0 <= s <= x.size:
        raise ValueError(f"sparsity {s} outside [0, {x.size}]")
    order = np.argsort(-np.abs(x), kind="stable")
    return np.sort(order[:s])


def hard_threshold(x, s):
    """Keep the ``s`` largest-magnitude entries of ``x``."""
    x = as_signal(x)
    return _keep(x, hard_threshold_support(x, s))


def exact_squares(x):
    """Integers proportional to x_j**2, exact for every finite double.

    Each |x_j| is a dyadic rational p / 2**k, so scaling all squares by the
    largest 2**(2k) gives integers whose sums and comparisons are exact.
    """
    ratios = [abs(float(v)).as_integer_ratio() for v in x]
    shift = max(den.bit_length() - 1 for _, den in ratios) if ratios else 0
    return [
        (num * num) << (2 * (shift - (den.bit_length() - 1))) for num, den in ratios
    ]


def support_energy(x, support):
    """Exact captured energy sum_{j in S} x_j**2 on the common integer scale."""
    sq = exact_squares(x)
    return sum(sq[j] for j in support)


def _knapsack_support(values, costs, cap):
    # best[j][c]: top value reachable with items j.. and capacity c
    n = len(values)
    best = [[0] * (cap + 1) for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        nxt, cur = best[j + 1], best[j]
        v, c_j = values[j], costs[j]
        if c_j > cap or v == 0:
            # zero-value items never change the objective; leaving them out
            # keeps the table small and the output signal is identical
            cur[:] = nxt
            continue
        cur[:c_j] = nxt[:c_j]
        for c in range(c_j, cap + 1):
            take = v + nxt[c - c_j]
            cur[c] = take if take >= nxt[c] else nxt[c]
    support = []
    c = cap
    for j in range(n):
        c_j = costs[j]
        if values[j] == 0 or c_j > c:
            continue
        # take on ties: prefer the lower index
        if values[j] + best[j + 1][c - c_j] >= best[j + 1][c]:
            support.append(j)
            c -= c_j
    return support


def _enum_support(values, w, s):
    n = len(values)
    if n > MAX_ENUMERATION:
        raise EnumerationLimitError(
            f"exact_enum handles at most {MAX_ENUMERATION} atoms, got {n}"
        )
    best_val, best_key, best = -1, None, ()
    for supp in enumerate_supports(w, s):
        val = sum(values[j] for j in supp)
        if val < best_val:
            continue
        # same preference as the knapsack walk: include the lowest index first
        key = tuple(1 if j in supp else 0 for j in range(n))
        if val > best_val or key > best_key:
            best_val, best_key, best = val, key, supp
    return [j for j in best if values[j] != 0]


def exact_weighted_support(x, w, s, mode="exact_dp"):
    x = as_signal(x)
    w = as_weights(w, x.size)
    s = float(s)
    if s < 0:
        raise ValueError("budget must be non-negative")
    values = exact_squares(x)
    if mode == "exact_dp":
        costs = w.integer_squares()
        if costs is None:
            raise UnsupportedWeightsError(
                "exact_dp needs integer squared weights; use exact_enum for small N"
            )
        supp = _knapsack_support(values, costs, integer_capacity(s))
    elif mode == "exact_enum":
        supp = _enum_support(values, w, s)
    else:
        raise ValueError(f"unknown exact mode {mode!r}")
    return np.asarray(supp, dtype=np.int64)


def exact_weighted_threshold(x, w, s, mode="exact_dp"):
    """Best approximation of ``x`` with weighted sparsity at most ``s``.

    Picks the support S maximising sum_{j in S} x_j**2 subject to
    sum_{j in S} w_j**2 <= s. ``exact_dp`` solves the 0/1 knapsack by dynamic
    programming in O(N * s) (integer squared weights only); ``exact_enum``
    searches all feasible supports (N <= 25). Energies are compared in exact
    integer arithmetic, so both modes find the same optimum.
    """
    x = as_signal(x)
    return _keep(x, exact_weighted_support(x, w, s, mode))


def surrogate_weighted_support(x, w, s, prefix_stop=False):
    x = as_signal(x)
    w = as_weights(w, x.size)
    s = float(s)
    order = np.argsort(-(np.abs(x) / w.values), kind="stable")
    sq = w.squared
    total = 0.0
    chosen = []
    for j in order:
        t = total + sq[j]
        if within_budget(t, s):
            chosen.append(j)
            total = t
        elif prefix_stop:
            break
    return np.sort(np.asarray(chosen, dtype=np.int64))


def surrogate_weighted_threshold(x, w, s, prefix_stop=False):
    """Sort by |x_j| / w_j and greedily fill the weighted budget.

    An index that does not fit is skipped and the scan continues; with
    ``prefix_stop=True`` the scan stops at the first misfit instead.
    """
    x = as_signal(x)
    return _keep(x, surrogate_weighted_support(x, w, s, prefix_stop))


def weighted_threshold(x, w, s, mode):
    """Dispatch to the projection named by ``mode``."""
    if mode == "surrogate":
        return surrogate_weighted_threshold(x, w, s)
    if mode in ("exact_dp", "exact_enum"):
        return exact_weighted_threshold(x, w, s, mode)
    raise ValueError(f"unknown projection mode {mode!r}")


def projection_error(x, z):
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise DimensionError("signals must have equal length")
    return float(np.linalg.norm(x - z))

"""Counting and enumerating index sets under a weighted-cardinality budget."""
import math

import numpy as np

from .core import (
    EnumerationLimitError,
    UnsupportedWeightsError,
    as_weights,
)

__all__ = [
    "BUDGET_RTOL",
    "MAX_ENUMERATION",
    "within_budget",
    "integer_capacity",
    "max_support_size",
    "count_supports",
    "enumerate_supports",
    "maximal_supports",
    "distinct_partitions",
]

BUDGET_RTOL = 1e-12
MAX_ENUMERATION = 25


def within_budget(total, s):
    """``total <= s`` up to a relative slack of ``BUDGET_RTOL``."""
    return total <= s + BUDGET_RTOL * abs(s)


def integer_capacity(s):
    """Largest integer capacity c with c <= s (up to the budget slack)."""
    return int(math.floor(s + BUDGET_RTOL * max(abs(s), 1.0)))


def _check_budget(s):
    s = float(s)
    if not (math.isfinite(s) and s >= 0):
        raise ValueError("budget s must be finite and non-negative")
    return s


def max_support_size(w, s):
    """Largest |I| with omega(I) <= s.

    Taking the smallest squared weights first is optimal because every item
    costs at least one.
    """
    w = as_weights(w)
    s = _check_budget(s)
    total = 0.0
    k = 0
    for sq in np.sort(w.squared):
        if not within_budget(total + sq, s):
            break
        total += sq
        k += 1
    return k


def count_supports(w, s, mode="exact", method="dp"):
    """Number of index sets I with omega(I) == s (``exact``) or <= s (``at_most``).

    ``method="dp"`` runs a subset-sum count over the integer squared weights
    with arbitrary-precision accumulators. ``method="enumerate"`` walks every
    set explicitly and is limited to ``MAX_ENUMERATION`` atoms.
    """
    if mode not in ("exact", "at_most"):
        raise ValueError(f"unknown mode {mode!r}")
    w = as_weights(w)
    s = _check_budget(s)

    if method == "enumerate":
        if mode == "at_most":
            return sum(1 for _ in enumerate_supports(w, s))
        sq = w.squared
        count = 0
        for supp in enumerate_supports(w, s):
            total = math.fsum(sq[list(supp)])
            if abs(total - s) <= BUDGET_RTOL * max(s, 1.0):
                count += 1
        return count
    if method != "dp":
        raise ValueError(f"unknown method {method!r}")

    items = w.integer_squares()
    if items is None:
        raise UnsupportedWeightsError(
            "subset-sum counting needs integer squared weights; "
            "use method='enumerate' on small instances"
        )
    cap = integer_capacity(s)
    if mode == "exact" and abs(cap - s) > BUDGET_RTOL * max(s, 1.0):
        return 0  # integer weights never sum to a fractional budget

    ways = [0] * (cap + 1)
    ways[0] = 1
    for c in items:
        if c > cap:
            continue
        for t in range(cap, c - 1, -1):
            if ways[t - c]:
                ways[t] += ways[t - c]
    return ways[cap] if mode == "exact" else sum(ways)


def enumerate_supports(w, s, n_limit=None):
    """Yield every index tuple I within ``range(n_limit)`` with omega(I) <= s.

    Depth-first, lexicographic order, pruning any branch whose accumulated
    weight already exceeds the budget.
    """
    w = as_weights(w)
    s = _check_budget(s)
    n = len(w) if n_limit is None else int(n_limit)
    if n > MAX_ENUMERATION:
        raise EnumerationLimitError(
            f"refusing to enumerate subsets of {n} > {MAX_ENUMERATION} atoms"
        )
    if n > len(w):
        raise ValueError("n_limit exceeds the number of weights")
    sq = [float(v) for v in w.squared[:n]]

    # explicit stack of (prefix, weight, next candidate index)
    stack = [((), 0.0, 0)]
    while stack:
        prefix, total, start = stack.pop()
        yield prefix
        children = []
        for j in range(start, n):
            t = total + sq[j]
            if within_budget(t, s):
                children.append((prefix + (j,), t, j + 1))
        stack.extend(reversed(children))


def maximal_supports(w, s, n_limit=None):
    """Feasible index tuples that admit no further atom.

    Every feasible set is contained in one of these, which is all that a
    monotone quantity such as a restricted isometry constant needs.
    """
    w = as_weights(w)
    n = len(w) if n_limit is None else int(n_limit)
    sq = w.squared[:n]
    s = _check_budget(s)
    for supp in enumerate_supports(w, s, n):
        total = math.fsum(sq[list(supp)])
        chosen = set(supp)
        if not any(
            j not in chosen and within_budget(total + sq[j], s) for j in range(n)
        ):
            yield supp


def distinct_partitions(n):
    """Partitions of ``n`` into distinct parts, via the pentagonal recurrence.

    Uses prod(1 + x^k) * prod(1 - x^k) = prod(1 - x^(2k)) and Euler's
    pentagonal expansion on both products; no subset-sum table is involved.
    """
    n = int(n)
    if n < 0:
        return 0
    pent = []  # (generalized pentagonal number, sign) for k = 1, -1, 2, -2, ...
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        pent.append((g1, sign))
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            pent.append((g2, sign))
        k += 1

    rhs = [0] * (n + 1)  # coefficients of prod(1 - x^(2k))
    rhs[0] = 1
    for g, sign in pent:
        if 2 * g <= n:
            rhs[2 * g] = -sign

    q = [0] * (n + 1)
    for t in range(n + 1):
        acc = rhs[t]
        for g, sign in pent:
            if g > t:
                break
            acc += sign * q[t - g]
        q[t] = acc
    return q[n]

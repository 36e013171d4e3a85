"""Power-law test signals, block weights and measurement noise."""
from dataclasses import dataclass

import numpy as np

from .combinatorics import within_budget
from .core import WeightVector, as_signal, as_weights
from .thresholding import hard_threshold

__all__ = [
    "PowerLawParams",
    "power_law_signal",
    "sparse_truncate",
    "block_weights",
    "best_ws_prefix",
    "gaussian_noise",
    "random_power_law_params",
    "DEFAULT_A_RANGE",
    "DEFAULT_B_RANGE",
    "DEFAULT_SIGMA",
]

DEFAULT_A_RANGE = (1, 10)
DEFAULT_B_RANGE = (1, 3)
DEFAULT_SIGMA = 0.01


@dataclass(frozen=True)
class PowerLawParams:
    a: int
    b: int
    n: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.n < 1:
            raise ValueError("power-law parameters need a >= 1, b >= 1, n >= 1")


def power_law_signal(p):
    """x(i) = a / i**b for the 1-based index i = 1..n."""
    i = np.arange(1, p.n + 1, dtype=float)
    return p.a / i ** p.b


def sparse_truncate(x, s):
    return hard_threshold(x, s)


def block_weights(n, s):
    """Weights 1 on the first s atoms, 3 on the next s, 10 on the rest."""
    n, s = int(n), int(s)
    if s < 0 or 2 * s >= n:
        raise ValueError(f"block weights need 2s < N (s={s}, N={n})")
    w = np.full(n, 10.0)
    w[:s] = 1.0
    w[s:2 * s] = 3.0
    return WeightVector(w)


def best_ws_prefix(x, w, s):
    """Best weighted s-sparse approximation of a monotone signal.

    When |x| is nonincreasing and w nondecreasing the optimum is a prefix:
    keep the largest k with w_1^2 + ... + w_k^2 <= s.
    """
    x = as_signal(x)
    w = as_weights(w, x.size)
    mag = np.abs(x)
    if np.any(np.diff(mag) > 0) or np.any(np.diff(w.values) < 0):
        raise ValueError(
            "prefix rule needs |x| nonincreasing and w nondecreasing; "
            "use exact_weighted_threshold instead"
        )
    csum = np.cumsum(w.squared)
    k = 0
    while k < x.size and within_budget(csum[k], s):
        k += 1
    out = np.zeros_like(x)
    out[:k] = x[:k]
    return out


def gaussian_noise(m, sigma, seed):
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0:
        return np.zeros(int(m))
    return sigma * np.random.default_rng(seed).standard_normal(int(m))


def random_power_law_params(seed, n, a_range=DEFAULT_A_RANGE, b_range=DEFAULT_B_RANGE):
    """Uniform integer draws of (a, b) from the inclusive ranges."""
    (a_lo, a_hi), (b_lo, b_hi) = a_range, b_range
    if a_lo > a_hi or b_lo > b_hi:
        raise ValueError("empty parameter range")
    rng = np.random.default_rng(seed)
    a = int(rng.integers(a_lo, a_hi + 1))
    b = int(rng.integers(b_lo, b_hi + 1))
    return PowerLawParams(a=a, b=b, n=int(n))

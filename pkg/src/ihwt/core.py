"""Weighted sparsity primitives.

Signals, weights and supports are plain numpy arrays. ``WeightVector`` is the
one wrapper type because it carries an invariant (every weight >= 1) that the
rest of the package relies on.
"""
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "UnsupportedWeightsError",
    "EnumerationLimitError",
    "PreconditionError",
    "NumericalError",
    "WeightVector",
    "as_weights",
    "as_signal",
    "as_support",
    "weighted_l0",
    "weighted_cardinality",
    "weighted_lp",
    "restrict",
    "support_of",
]


class DimensionError(ValueError):
    """Lengths or indices do not line up."""


class UnsupportedWeightsError(ValueError):
    """The requested method needs integer squared weights."""


class EnumerationLimitError(ValueError):
    """Refused an exhaustive enumeration that would be too large."""


class PreconditionError(ValueError):
    """A theorem or algorithm hypothesis is not met."""


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to converge."""


# squared weights within this distance of an integer count as integers
INTEGER_SQUARE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Per-atom weights, each at least one."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size < 1:
            raise DimensionError("weight vector must be non-empty")
        if not np.all(np.isfinite(vals)):
            raise ValueError("weights must be finite")
        if np.any(vals < 1.0):
            raise ValueError("weights must satisfy w_j >= 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    @classmethod
    def uniform(cls, n):
        return cls(np.ones(n))

    @classmethod
    def sqrt_index(cls, n):
        """w_j = sqrt(j) for the 1-based index j."""
        return cls(np.sqrt(np.arange(1, n + 1, dtype=float)))

    @property
    def squared(self):
        return self.values ** 2

    @property
    def max(self):
        return float(self.values.max())

    def is_uniform(self):
        return bool(np.all(self.values == self.values[0]))

    def integer_squares(self):
        """Squared weights as Python ints, or None if any is not integral."""
        sq = self.squared
        rounded = np.rint(sq)
        if np.any(np.abs(sq - rounded) > INTEGER_SQUARE_TOL):
            return None
        return [int(v) for v in rounded]


def as_weights(w, n=None):
    if not isinstance(w, WeightVector):
        w = WeightVector(w)
    if n is not None and len(w) != n:
        raise DimensionError(f"expected {n} weights, got {len(w)}")
    return w


def as_signal(x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError("signal must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal entries must be finite")
    return x


def as_support(indices, n):
    """Validate an index set and return it as a sorted int array."""
    idx = np.asarray(indices, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise DimensionError(f"support index out of range [0, {n})")
    out = np.unique(idx)
    if out.size != idx.size:
        raise ValueError("support indices must be distinct")
    return out


def weighted_l0(x, w):
    """Sum of squared weights over the exact support of ``x``."""
    x = as_signal(x)
    w = as_weights(w, x.size)
    return math.fsum(w.squared[x != 0.0])


def weighted_cardinality(support, w):
    w = as_weights(w)
    idx = as_support(support, len(w))
    return math.fsum(w.squared[idx])


def weighted_lp(x, w, p):
    """sum_{x_j != 0} |x_j|^p w_j^(2-p), with no outer p-th root."""
    if not p > 0:
        raise ValueError("p must be positive")
    x = as_signal(x)
    w = as_weights(w, x.size)
    nz = x != 0.0
    return math.fsum(np.abs(x[nz]) ** p * w.values[nz] ** (2.0 - p))


def restrict(x, support):
    x = as_signal(x)
    idx = as_support(support, x.size)
    out = np.zeros_like(x)
    out[idx] = x[idx]
    return out


def support_of(x):
    return np.flatnonzero(np.asarray(x) != 0.0)

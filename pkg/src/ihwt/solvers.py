"""Greedy sparse solvers: IHWT and the IHT, CoSaMP and OMP baselines."""
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DimensionError,
    PreconditionError,
    UnsupportedWeightsError,
    as_signal,
    as_weights,
)
from .thresholding import (
    PROJECTION_MODES,
    hard_threshold,
    hard_threshold_support,
    weighted_threshold,
)

__all__ = [
    "SolverConfig",
    "SolverTrace",
    "iht",
    "ihwt",
    "cosamp",
    "omp",
    "objective",
    "RIDGE",
]

RIDGE = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 500
    halt_tol: float = 1e-10
    projection: str = "exact_dp"
    step_size: float = 1.0
    store_iterates: bool = True
    x0: np.ndarray = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.halt_tol < 0:
            raise ValueError("halt_tol must be >= 0")
        if not self.step_size > 0:
            raise ValueError("step_size must be > 0")
        if self.projection not in PROJECTION_MODES:
            raise ValueError(f"unknown projection {self.projection!r}")


@dataclass
class SolverTrace:
    """Per-iteration record, starting with the initial iterate x^0.

    With ``store_iterates=False`` only the last iterate is kept in
    ``iterates``; the scalar histories are always complete.
    """

    iterates: list = field(default_factory=list)
    objectives: list = field(default_factory=list)
    supports: list = field(default_factory=list)
    residual_norms: list = field(default_factory=list)
    step_norms: list = field(default_factory=list)
    converged: bool = False
    diverged: bool = False
    ridge_used: bool = False
    keep_all: bool = True

    def record(self, x, r):
        if self.keep_all or not self.iterates:
            self.iterates.append(x)
        else:
            self.iterates[-1] = x
        rn = float(np.linalg.norm(r))
        self.objectives.append(0.5 * rn * rn)
        self.supports.append(np.flatnonzero(x))
        self.residual_norms.append(rn)

    @property
    def x(self):
        return self.iterates[-1]

    @property
    def iterations(self):
        return len(self.objectives) - 1


def objective(a, y, x):
    r = y - a @ x
    return 0.5 * float(r @ r)


def _check_problem(a, y):
    a = np.asarray(a, dtype=float)
    y = as_signal(y)
    if a.ndim != 2 or a.shape[0] != y.size:
        raise DimensionError(f"matrix shape {a.shape} incompatible with {y.size} samples")
    return a, y


def _initial(a, cfg):
    n = a.shape[1]
    if cfg.x0 is None:
        return np.zeros(n)
    x0 = as_signal(cfg.x0)
    if x0.size != n:
        raise DimensionError("x0 has the wrong length")
    return x0.copy()


def _projected_gradient(a, y, project, cfg):
    x = _initial(a, cfg)
    trace = SolverTrace(keep_all=cfg.store_iterates)
    r = y - a @ x
    trace.record(x, r)
    for _ in range(cfg.max_iters):
        with np.errstate(over="ignore", invalid="ignore"):
            step = x + cfg.step_size * (a.T @ r)
        if not np.all(np.isfinite(step)):
            trace.diverged = True
            break
        x_new = project(step)
        with np.errstate(over="ignore", invalid="ignore"):
            r = y - a @ x_new
        if not np.all(np.isfinite(r)):
            trace.diverged = True
            break
        diff = float(np.linalg.norm(x_new - x))
        trace.record(x_new, r)
        trace.step_norms.append(diff)
        x = x_new
        if diff <= cfg.halt_tol:
            trace.converged = True
            break
    return trace


def iht(a, y, s, cfg=SolverConfig()):
    """Iterative hard thresholding, x <- H_s(x + A^T (y - A x))."""
    a, y = _check_problem(a, y)
    s = int(s)
    if not 0 <= s <= a.shape[1]:
        raise ValueError(f"sparsity {s} outside [0, {a.shape[1]}]")
    return _projected_gradient(a, y, lambda z: hard_threshold(z, s), cfg)


def ihwt(a, y, w, s, cfg=SolverConfig()):
    """Iterative hard weighted thresholding.

    Same loop as ``iht`` with the projection replaced by the weighted one
    selected by ``cfg.projection``.
    """
    a, y = _check_problem(a, y)
    w = as_weights(w, a.shape[1])
    if cfg.projection == "exact_dp" and w.integer_squares() is None:
        raise UnsupportedWeightsError("exact_dp projection needs integer squared weights")
    return _projected_gradient(
        a, y, lambda z: weighted_threshold(z, w, s, cfg.projection), cfg
    )


def _least_squares(a, y, support):
    """Normal-equation solve on ``support``; ridge on degenerate systems."""
    sub = a[:, support]
    gram = sub.T @ sub
    rhs = sub.T @ y
    degenerate = support.size > a.shape[0] or np.linalg.cond(gram) > 1e12
    if not degenerate:
        try:
            return np.linalg.solve(gram, rhs), False
        except np.linalg.LinAlgError:
            pass
    return np.linalg.solve(gram + RIDGE * np.eye(support.size), rhs), True


def cosamp(a, y, s, cfg=SolverConfig()):
    """Compressive sampling matching pursuit.

    Merge the 2s largest proxy entries with the current support, solve least
    squares there, prune to the s largest coefficients.
    """
    a, y = _check_problem(a, y)
    n = a.shape[1]
    s = int(s)
    if s < 1 or 3 * s > n:
        raise PreconditionError(f"CoSaMP needs 1 <= s and 3s <= N (s={s}, N={n})")
    x = _initial(a, cfg)
    trace = SolverTrace(keep_all=cfg.store_iterates)
    r = y - a @ x
    trace.record(x, r)
    for _ in range(cfg.max_iters):
        proxy = a.T @ r
        omega = hard_threshold_support(proxy, 2 * s)
        merged = np.union1d(omega, np.flatnonzero(x))
        coef, ridged = _least_squares(a, y, merged)
        trace.ridge_used |= ridged
        b = np.zeros(n)
        b[merged] = coef
        x_new = hard_threshold(b, s)
        r = y - a @ x_new
        if not np.all(np.isfinite(x_new)):
            trace.diverged = True
            break
        diff = float(np.linalg.norm(x_new - x))
        trace.record(x_new, r)
        trace.step_norms.append(diff)
        x = x_new
        if diff <= cfg.halt_tol:
            trace.converged = True
            break
    return trace


def omp(a, y, s, cfg=SolverConfig()):
    """Orthogonal matching pursuit with ``s`` greedy atom selections."""
    a, y = _check_problem(a, y)
    m, n = a.shape
    s = int(s)
    if not 0 <= s <= min(m, n):
        raise PreconditionError(f"OMP needs s <= min(m, N) (s={s}, m={m}, N={n})")
    x = np.zeros(n)
    trace = SolverTrace(keep_all=cfg.store_iterates)
    r = y.copy()
    trace.record(x, r)
    chosen = []
    for _ in range(s):
        corr = np.abs(a.T @ r)
        corr[chosen] = -1.0
        chosen.append(int(np.argmax(corr)))
        support = np.asarray(sorted(chosen))
        coef, ridged = _least_squares(a, y, support)
        trace.ridge_used |= ridged
        x_new = np.zeros(n)
        x_new[support] = coef
        r = y - a @ x_new
        trace.record(x_new, r)
        trace.step_norms.append(float(np.linalg.norm(x_new - x)))
        x = x_new
        if trace.residual_norms[-1] <= cfg.halt_tol:
            break
    trace.converged = True
    return trace

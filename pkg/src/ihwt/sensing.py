"""Gaussian ensembles, spectral norms and restricted isometry constants."""
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .combinatorics import MAX_ENUMERATION, maximal_supports
from .core import (
    DimensionError,
    EnumerationLimitError,
    NumericalError,
    as_signal,
    as_weights,
)

__all__ = [
    "RipEstimate",
    "gaussian_matrix",
    "apply",
    "adjoint_apply",
    "spectral_norm",
    "rip_constant",
    "submatrix_delta",
    "RipBoundReport",
    "check_rip_bounds",
    "random_feasible_support",
]


def gaussian_matrix(m, n, seed, scaling="rip", c=None):
    """Draw an m x n matrix with i.i.d. normal entries.

    ``scaling="rip"`` uses variance 1/m so columns have norm close to one.
    ``scaling="spectral"`` rescales the draw so its spectral norm is exactly
    ``c`` (which must lie in (0, 1)).
    """
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n)) / np.sqrt(m)
    if scaling == "rip":
        return a
    if scaling == "spectral":
        if c is None or not 0 < c < 1:
            raise ValueError("spectral scaling needs 0 < c < 1")
        return a * (c / np.linalg.norm(a, 2))
    raise ValueError(f"unknown scaling {scaling!r}")


def _check_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or min(a.shape) < 1:
        raise DimensionError("sensing matrix must be a non-empty 2-D array")
    return a


def apply(a, x):
    a = _check_matrix(a)
    x = as_signal(x)
    if x.size != a.shape[1]:
        raise DimensionError(f"signal length {x.size} != {a.shape[1]} columns")
    return a @ x


def adjoint_apply(a, y):
    a = _check_matrix(a)
    y = as_signal(y)
    if y.size != a.shape[0]:
        raise DimensionError(f"measurement length {y.size} != {a.shape[0]} rows")
    return a.T @ y


def spectral_norm(a, tol=1e-12, max_iter=100_000):
    """Largest singular value by power iteration on A^T A.

    Starts from the normalised all-ones vector so results are reproducible.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = _check_matrix(a)
    v = np.ones(a.shape[1]) / np.sqrt(a.shape[1])
    lam = 0.0
    for _ in range(max_iter):
        u = a.T @ (a @ v)
        lam_new = float(v @ u)
        nu = np.linalg.norm(u)
        if nu == 0.0:
            # start vector in the null space; fall back to a unit basis sweep
            u = a.T @ a[:, int(np.argmax(np.linalg.norm(a, axis=0)))]
            nu = np.linalg.norm(u)
            if nu == 0.0:
                return 0.0
        v = u / nu
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return float(np.sqrt(max(lam_new, 0.0)))
        lam = lam_new
    raise NumericalError(f"power iteration did not converge in {max_iter} steps")


@dataclass(frozen=True)
class RipEstimate:
    delta: float
    order: float
    kind: str  # "weighted" or "unweighted"
    supports_checked: int


def submatrix_delta(gram, supports):
    """max over supports of max(lambda_max - 1, 1 - lambda_min) of Gram blocks.

    Supports of equal size are stacked and solved in one batched eigensolve.
    """
    by_size = defaultdict(list)
    for supp in supports:
        if supp:
            by_size[len(supp)].append(supp)
    delta = 0.0
    for idx in by_size.values():
        idx = np.asarray(idx)
        blocks = gram[idx[:, :, None], idx[:, None, :]]
        ev = np.linalg.eigvalsh(blocks)
        delta = max(delta, float(np.max(ev[:, -1] - 1.0)), float(np.max(1.0 - ev[:, 0])))
    return delta


def rip_constant(a, w=None, s=1.0):
    """Restricted isometry constant over supports with omega(I) <= s.

    ``w=None`` means unit weights, i.e. the classical constant of order
    floor(s). Exact by enumeration, so limited to N <= 25. Only maximal
    feasible supports are examined; eigenvalue interlacing makes that exact.
    """
    a = _check_matrix(a)
    n = a.shape[1]
    if n > MAX_ENUMERATION:
        raise EnumerationLimitError(
            f"exact RIP estimation is limited to N <= {MAX_ENUMERATION}, got {n}"
        )
    kind = "unweighted" if w is None else "weighted"
    w = as_weights(np.ones(n) if w is None else w, n)
    supports = list(maximal_supports(w, s))
    gram = a.T @ a
    return RipEstimate(
        delta=submatrix_delta(gram, supports),
        order=float(s),
        kind=kind,
        supports_checked=max(len(supports), 1),
    )


def random_feasible_support(rng, w, budget):
    """A random index set filled in random order while it fits the budget."""
    sq = w.squared
    total = 0.0
    chosen = []
    for j in rng.permutation(len(w)):
        if rng.random() < 0.5:
            continue
        if total + sq[j] <= budget:
            chosen.append(int(j))
            total += sq[j]
    return np.sort(np.asarray(chosen, dtype=np.int64))


@dataclass
class RipBoundReport:
    trials: int
    violations: dict
    worst_margin: dict  # rhs - lhs, minimised over trials (>= 0 means satisfied)

    @property
    def ok(self):
        return not any(self.violations.values())


def check_rip_bounds(a, w, trials, seed, budgets=None, rtol=1e-12):
    """Randomised check of the three standard restricted-isometry inequalities.

    For random u, v, S and measurement vectors drawn so that the weighted
    support hypotheses hold, verify

    1. |<u, (I - A^T A) v>| <= delta_t ||u|| ||v||
    2. ||((I - A^T A) v)_S|| <= delta_t ||v||
    3. ||(A^T y)_S|| <= sqrt(1 + delta_s) ||y||

    with every delta computed exactly by enumeration (N <= 20).
    """
    a = _check_matrix(a)
    m, n = a.shape
    if n > 20:
        raise EnumerationLimitError("check_rip_bounds is limited to N <= 20")
    w = as_weights(w, n)
    if budgets is None:
        lo = float(w.squared.min())
        budgets = sorted({lo, 2 * lo, 4.0, 6.0, 8.0})
    deltas = {t: rip_constant(a, w, t).delta for t in budgets}
    rng = np.random.default_rng(seed)
    resid = np.eye(n) - a.T @ a
    names = ("inner_product", "restricted_residual", "adjoint_energy")
    violations = dict.fromkeys(names, 0)
    worst = dict.fromkeys(names, np.inf)

    def record(name, lhs, rhs):
        worst[name] = min(worst[name], rhs - lhs)
        if lhs > rhs + rtol * max(rhs, 1.0):
            violations[name] += 1

    for _ in range(trials):
        t = budgets[rng.integers(len(budgets))]
        delta = deltas[t]

        joint = random_feasible_support(rng, w, t)
        u = np.zeros(n)
        v = np.zeros(n)
        if joint.size:
            split = rng.random(joint.size)
            su = joint[split < 0.7]
            sv = joint[split >= 0.3]
            u[su] = rng.standard_normal(su.size)
            v[sv] = rng.standard_normal(sv.size)
        record("inner_product", abs(u @ resid @ v), delta * np.linalg.norm(u) * np.linalg.norm(v))

        joint = random_feasible_support(rng, w, t)
        v = np.zeros(n)
        s_set = np.array([], dtype=np.int64)
        if joint.size:
            split = rng.random(joint.size)
            s_set = joint[split < 0.7]
            sv = joint[split >= 0.3]
            v[sv] = rng.standard_normal(sv.size)
        record("restricted_residual", np.linalg.norm((resid @ v)[s_set]), delta * np.linalg.norm(v))

        s_set = random_feasible_support(rng, w, t)
        y = rng.standard_normal(m)
        record("adjoint_energy", np.linalg.norm((a.T @ y)[s_set]), np.sqrt(1.0 + delta) * np.linalg.norm(y))

    return RipBoundReport(trials=trials, violations=violations, worst_margin=worst)

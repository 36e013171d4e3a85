"""Empirical checks of the convergence guarantees on solver traces."""
import math
from dataclasses import dataclass, field

import numpy as np

from .core import DimensionError, PreconditionError, as_signal, as_weights, weighted_lp
from .sensing import rip_constant

__all__ = [
    "RIP_THRESHOLD",
    "mm_surrogate",
    "DescentReport",
    "descent_diagnostics",
    "BoundReport",
    "theorem_bound",
    "ContractionReport",
    "contraction_report",
    "EnergyBoundReport",
    "weighted_energy_bound_check",
    "gradient_step_check",
]

RIP_THRESHOLD = 1.0 / math.sqrt(32.0)


def _f(a, y, x):
    r = y - a @ x
    return 0.5 * float(r @ r)


def mm_surrogate(a, y, x, z, halved=False):
    """g(x, z) = 1/2 ||y - A x||^2 - ||A (x - z)||^2 + ||x - z||^2.

    With ``halved=True`` the two correction terms carry a factor 1/2, which
    is the scaling whose minimiser over a sparsity set is the thresholded
    unit gradient step for f(x) = 1/2 ||y - A x||^2.
    """
    a = np.asarray(a, dtype=float)
    x, z, y = as_signal(x), as_signal(z), as_signal(y)
    if x.shape != z.shape or a.shape != (y.size, x.size):
        raise DimensionError("incompatible shapes for the surrogate")
    d = x - z
    ad = a @ d
    c = 0.5 if halved else 1.0
    return _f(a, y, x) + c * (float(d @ d) - float(ad @ ad))


@dataclass
class DescentReport:
    objectives: list
    surrogates: list  # g(x^{n+1}, x^n)
    partial_sums: list  # sum_{i<=n} ||x^{i+1} - x^i||^2
    sum_bound: float  # f(x^0) / (1 - ||A||^2)
    monotone: bool
    interleaved: bool
    summable: bool
    worst: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.monotone and self.interleaved and self.summable


def descent_diagnostics(trace, a, y, spec_norm=None, rtol=1e-12, halved=False):
    """Check the majorization-minimization descent properties of a trace.

    * f(x^n) is nonincreasing,
    * f(x^{n+1}) <= g(x^{n+1}, x^n) <= f(x^n),
    * sum ||x^{i+1} - x^i||^2 <= f(x^0) / (1 - ||A||_2^2).

    Needs a trace with every iterate stored and ||A||_2 < 1. Comparisons allow
    a relative slack ``rtol`` of the larger side. ``halved`` selects the
    surrogate scaling, see ``mm_surrogate``.
    """
    a = np.asarray(a, dtype=float)
    y = as_signal(y)
    xs = trace.iterates
    if len(xs) != len(trace.objectives):
        raise ValueError("descent diagnostics need a trace with all iterates stored")
    if spec_norm is None:
        spec_norm = float(np.linalg.norm(a, 2))
    if not spec_norm < 1:
        raise PreconditionError("descent guarantees need ||A||_2 < 1")
    gap = 1.0 - spec_norm ** 2

    f = [_f(a, y, x) for x in xs]
    g = [mm_surrogate(a, y, xs[n + 1], xs[n], halved) for n in range(len(xs) - 1)]
    sums = list(np.cumsum([float(np.sum((xs[n + 1] - xs[n]) ** 2)) for n in range(len(xs) - 1)]))
    bound = f[0] / gap

    def slack(lo, hi):
        return hi - lo + rtol * max(abs(lo), abs(hi))

    mono = [slack(f[n + 1], f[n]) for n in range(len(f) - 1)]
    upper = [slack(f[n + 1], g[n]) for n in range(len(g))]
    lower = [slack(g[n], f[n]) for n in range(len(g))]
    summ = [slack(v, bound) for v in sums]
    worst = {
        "monotone": min(mono, default=math.inf),
        "majorized": min(upper, default=math.inf),
        "surrogate_descent": min(lower, default=math.inf),
        "summation": min(summ, default=math.inf),
    }
    return DescentReport(
        objectives=f,
        surrogates=g,
        partial_sums=sums,
        sum_bound=bound,
        monotone=worst["monotone"] >= 0,
        interleaved=worst["majorized"] >= 0 and worst["surrogate_descent"] >= 0,
        summable=worst["summation"] >= 0,
        worst=worst,
    )


@dataclass
class BoundReport:
    lhs: list
    rhs: list
    satisfied: bool
    components: dict


def theorem_bound(trace, a, x_true, x_best, e, delta_3s, w, s, variant="general"):
    """Per-iteration error bound for IHWT under a certified weighted RIP.

    ``general``:     ||x - x^n|| <= 2^-n ||x^s|| + ||x - x^s|| + 4.34 ||A x_tail + e||
    ``weighted_l1``: ||x - x^n|| <= 2^-n ||x^s||
                                    + 6 (||x - x^s|| + 2/sqrt(s) ||x - x^s||_{w,1} + ||e||)

    where x^s = ``x_best`` and x_tail = x - x^s. The bound is only claimed
    when ``delta_3s < 1/sqrt(32)``; the weighted variant also needs
    s >= 2 max(w)^2.
    """
    if not delta_3s < RIP_THRESHOLD:
        raise PreconditionError(f"delta_3s={delta_3s:.4g} is not below 1/sqrt(32)")
    a = np.asarray(a, dtype=float)
    x_true, x_best, e = as_signal(x_true), as_signal(x_best), as_signal(e)
    w = as_weights(w, x_true.size)
    if variant == "weighted_l1" and s < 2 * w.max ** 2:
        raise PreconditionError("weighted_l1 bound needs s >= 2 max(w)^2")

    tail = x_true - x_best
    best_norm = float(np.linalg.norm(x_best))
    tail_norm = float(np.linalg.norm(tail))
    e_norm = float(np.linalg.norm(e))
    tail_meas = float(np.linalg.norm(a @ tail + e))
    components = {
        "best_norm": best_norm,
        "tail_norm": tail_norm,
        "tail_measurement_norm": tail_meas,
        "noise_norm": e_norm,
        "tail_l1": float(np.sum(np.abs(tail))),
        "tail_weighted_l1": weighted_lp(tail, w, 1),
    }
    # unrecoverable energy of the unweighted guarantee, for reference
    components["unrecoverable_energy"] = (
        tail_norm + components["tail_l1"] / math.sqrt(s) + e_norm
    )

    if variant == "general":
        floor = tail_norm + 4.34 * tail_meas
    elif variant == "weighted_l1":
        floor = 6.0 * (tail_norm + 2.0 / math.sqrt(s) * components["tail_weighted_l1"] + e_norm)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    components["floor"] = floor

    lhs = [float(np.linalg.norm(x_true - x)) for x in trace.iterates]
    rhs = [2.0 ** -n * best_norm + floor for n in range(len(lhs))]
    return BoundReport(
        lhs=lhs,
        rhs=rhs,
        satisfied=all(l <= r for l, r in zip(lhs, rhs)),
        components=components,
    )


@dataclass
class ContractionReport:
    errors: list  # ||x^s - x^n||
    ratios: list  # ||r^{n+1}|| / ||r^n|| while above the floor
    floor: float
    one_step_ok: bool  # ||r^{n+1}|| <= sqrt(8) d ||r^n|| + 2 sqrt(1+d) ||A x_tail + e||
    max_ratio: float


def contraction_report(trace, a, x_true, x_best, e, delta_3s):
    """Per-step contraction of r^n = x^s - x^n.

    The one-step inequality ||r^{n+1}|| <= sqrt(8) d ||r^n|| + 2 sqrt(1+d) eta,
    eta = ||A x_tail + e||, gives a ratio of at most 1/2 whenever
    ||r^n|| >= floor = 2 sqrt(1+d) eta / (1/2 - sqrt(8) d). Ratios are
    reported for those steps only.
    """
    if not delta_3s < RIP_THRESHOLD:
        raise PreconditionError(f"delta_3s={delta_3s:.4g} is not below 1/sqrt(32)")
    a = np.asarray(a, dtype=float)
    x_true, x_best, e = as_signal(x_true), as_signal(x_best), as_signal(e)
    eta = float(np.linalg.norm(a @ (x_true - x_best) + e))
    rate = math.sqrt(8.0) * delta_3s
    lift = 2.0 * math.sqrt(1.0 + delta_3s) * eta
    floor = lift / (0.5 - rate)
    errs = [float(np.linalg.norm(x_best - x)) for x in trace.iterates]
    ratios = []
    one_step = True
    for n in range(len(errs) - 1):
        if errs[n + 1] > rate * errs[n] + lift + 1e-12 * errs[n]:
            one_step = False
        if errs[n] > floor and errs[n] > 0:
            ratios.append(errs[n + 1] / errs[n])
    return ContractionReport(
        errors=errs,
        ratios=ratios,
        floor=floor,
        one_step_ok=one_step,
        max_ratio=max(ratios, default=0.0),
    )


@dataclass
class EnergyBoundReport:
    trials: int
    delta: float
    violations: int
    worst_margin: float  # min over trials of rhs - lhs


def weighted_energy_bound_check(a, w, s, trials, seed, delta=None, rtol=1e-12):
    """||A x|| <= sqrt(1 + d) (||x|| + 2/sqrt(s) ||x||_{w,1}) for random dense x.

    ``d`` is the weighted restricted isometry constant of order ``s``,
    computed by enumeration unless supplied.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[1]
    w = as_weights(w, n)
    if s < 2 * w.max ** 2:
        raise PreconditionError("needs s >= 2 max(w)^2")
    if delta is None:
        delta = rip_constant(a, w, s).delta
    rng = np.random.default_rng(seed)
    scale = math.sqrt(1.0 + delta)
    violations = 0
    worst = math.inf
    for k in range(trials):
        x = rng.standard_normal(n)
        if k % 3 == 1:
            x *= rng.random(n) ** 4  # uneven magnitudes
        elif k % 3 == 2:
            x = x[rng.permutation(n)] / np.arange(1, n + 1)
        lhs = float(np.linalg.norm(a @ x))
        rhs = scale * (float(np.linalg.norm(x)) + 2.0 / math.sqrt(s) * weighted_lp(x, w, 1))
        worst = min(worst, rhs - lhs)
        if lhs > rhs * (1 + rtol):
            violations += 1
    return EnergyBoundReport(trials=trials, delta=delta, violations=violations, worst_margin=worst)


def gradient_step_check(a, y, x, h=1e-6):
    """Relative gap between A^T (y - A x) and a central-difference -grad f(x)."""
    a = np.asarray(a, dtype=float)
    x = as_signal(x)
    analytic = a.T @ (y - a @ x)
    fd = np.empty_like(x)
    for j in range(x.size):
        step = np.zeros_like(x)
        step[j] = h
        fd[j] = -(_f(a, y, x + step) - _f(a, y, x - step)) / (2 * h)
    return float(np.linalg.norm(analytic - fd) / max(np.linalg.norm(analytic), 1e-300))

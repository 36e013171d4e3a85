"""Monte Carlo recovery experiments on power-law signals.

Each trial draws a fresh Gaussian matrix, power-law signal and (for noisy
protocols) noise vector from a seed keyed by (master seed, sweep value,
trial index), so results do not depend on execution order or worker count.
All solvers in a trial see the same matrix and measurements.
"""
import logging
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from .sensing import gaussian_matrix
from .signal_models import (
    DEFAULT_A_RANGE,
    DEFAULT_B_RANGE,
    best_ws_prefix,
    block_weights,
    gaussian_noise,
    power_law_signal,
    random_power_law_params,
    sparse_truncate,
)
from .solvers import SolverConfig, cosamp, ihwt, iht, omp

log = logging.getLogger(__name__)

__all__ = [
    "PROTOCOLS",
    "SOLVERS",
    "ExperimentConfig",
    "TrialResult",
    "AggregateRow",
    "AggregateResult",
    "normalized_error",
    "exact_recovery",
    "run_trial",
    "run_experiment",
    "run_sparsity_sweep",
    "run_measurement_sweep",
    "run_noisy_sparsity_sweep",
    "run_noisy_measurement_sweep",
    "aggregate",
    "PRESETS",
    "PRESET_METRIC",
    "preset",
]

PROTOCOLS = ("sparsity", "measurement", "noisy_sparsity", "noisy_measurement")
SOLVERS = ("ihwt", "iht", "cosamp", "omp")


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str = "measurement"
    n: int = 256
    m: tuple = (128,)
    s: tuple = (25,)
    trials: int = 200
    seed: int = 0
    solvers: tuple = SOLVERS
    sigma: float = 0.0
    projection: str = "surrogate"
    recovery_tol: float = 1e-4
    a_range: tuple = DEFAULT_A_RANGE
    b_range: tuple = DEFAULT_B_RANGE
    matrix_scaling: str = "spectral"
    spectral_norm: float = 0.99
    max_iters: int = 500
    halt_tol: float = 1e-10

    def __post_init__(self):
        for name in ("m", "s", "solvers", "a_range", "b_range"):
            val = getattr(self, name)
            if isinstance(val, (int, str)):
                val = (val,)
            object.__setattr__(self, name, tuple(val))
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name in ("m", "s"):
            vals = getattr(self, name)
            if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} must be a nonempty increasing list")
        fixed = "s" if self.sweep_param == "m" else "m"
        if len(getattr(self, fixed)) != 1:
            raise ValueError(f"protocol {self.protocol} sweeps {self.sweep_param}; {fixed} must be a single value")
        unknown = set(self.solvers) - set(SOLVERS)
        if unknown or not self.solvers:
            raise ValueError(f"unknown solvers {sorted(unknown)}")
        if 2 * max(self.s) >= self.n:
            raise ValueError("block weights need 2s < N")
        if min(self.m) < 1:
            raise ValueError("m must be positive")
        noisy = self.protocol.startswith("noisy")
        if noisy and not self.sigma > 0:
            raise ValueError("noisy protocols need sigma > 0")
        if not noisy and self.sigma != 0:
            raise ValueError("noiseless protocols need sigma = 0")
        if not self.recovery_tol > 0:
            raise ValueError("recovery_tol must be positive")

    @property
    def sweep_param(self):
        return "s" if self.protocol.endswith("sparsity") else "m"

    @property
    def sweep_values(self):
        return getattr(self, self.sweep_param)

    @property
    def noisy(self):
        return self.protocol.startswith("noisy")

    def point(self, value):
        """(m, s) for one sweep value."""
        if self.sweep_param == "s":
            return self.m[0], value
        return value, self.s[0]


@dataclass(frozen=True)
class TrialResult:
    solver: str
    sweep_value: int
    trial: int
    error: float
    recovered: bool
    iterations: int
    wall_time: float


def normalized_error(x_best, x_approx, e):
    """||x_best - x_approx|| / ||e||."""
    en = float(np.linalg.norm(e))
    if en == 0.0:
        raise ZeroDivisionError("normalized error is undefined for zero noise")
    return float(np.linalg.norm(np.asarray(x_best) - np.asarray(x_approx))) / en


def exact_recovery(x_true, x_approx, tol=1e-4):
    if not tol > 0:
        raise ValueError("tol must be positive")
    return bool(np.linalg.norm(np.asarray(x_approx) - np.asarray(x_true)) <= tol)


def _trial_problem(cfg, value, trial):
    m, s = cfg.point(value)
    ss = np.random.SeedSequence([cfg.seed, value, trial])
    mat_seed, sig_seed, noise_seed = ss.spawn(3)
    if cfg.matrix_scaling == "spectral":
        a = gaussian_matrix(m, cfg.n, mat_seed, "spectral", cfg.spectral_norm)
    else:
        a = gaussian_matrix(m, cfg.n, mat_seed, cfg.matrix_scaling)
    params = random_power_law_params(sig_seed, cfg.n, cfg.a_range, cfg.b_range)
    x = power_law_signal(params)
    w = block_weights(cfg.n, s)
    if cfg.noisy:
        e = gaussian_noise(m, cfg.sigma, noise_seed)
        x_best = best_ws_prefix(x, w, s)
        y = a @ x + e
    else:
        e = None
        x_best = sparse_truncate(x, s)
        y = a @ x_best
    return a, y, w, s, x_best, e


def run_trial(cfg, value, trial):
    """Run every configured solver on one random problem instance."""
    a, y, w, s, x_best, e = _trial_problem(cfg, value, trial)
    scfg = SolverConfig(
        max_iters=cfg.max_iters,
        halt_tol=cfg.halt_tol,
        projection=cfg.projection,
        store_iterates=False,
    )
    out = []
    for name in cfg.solvers:
        t0 = time.perf_counter()
        if name == "ihwt":
            tr = ihwt(a, y, w, s, scfg)
        elif name == "iht":
            tr = iht(a, y, s, scfg)
        elif name == "cosamp":
            tr = cosamp(a, y, s, scfg)
        else:
            # with fewer samples than atoms OMP can pick at most m of them
            tr = omp(a, y, min(s, a.shape[0]), scfg)
        elapsed = time.perf_counter() - t0
        x_hat = tr.x
        err = normalized_error(x_best, x_hat, e) if cfg.noisy else float(np.linalg.norm(x_hat - x_best))
        out.append(
            TrialResult(
                solver=name,
                sweep_value=int(value),
                trial=int(trial),
                error=err,
                recovered=exact_recovery(x_best, x_hat, cfg.recovery_tol),
                iterations=tr.iterations,
                wall_time=elapsed,
            )
        )
    return out


def _run_task(args):
    return run_trial(*args)


def run_experiment(cfg, workers=1, progress=None):
    """Run all trials of ``cfg`` and aggregate them.

    ``workers > 1`` spreads trials over a process pool; the aggregate is
    identical to a serial run.
    """
    tasks = [(cfg, v, t) for v in cfg.sweep_values for t in range(cfg.trials)]
    results = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (8 * workers))):
                results.extend(chunk)
    else:
        for k, task in enumerate(tasks):
            results.extend(_run_task(task))
            if progress is not None:
                progress(k + 1, len(tasks))
    return aggregate(results, cfg)


def _expect(cfg, protocol):
    if cfg.protocol != protocol:
        raise ValueError(f"expected protocol {protocol!r}, got {cfg.protocol!r}")
    return cfg


def run_sparsity_sweep(cfg, workers=1):
    return run_experiment(_expect(cfg, "sparsity"), workers)


def run_measurement_sweep(cfg, workers=1):
    return run_experiment(_expect(cfg, "measurement"), workers)


def run_noisy_sparsity_sweep(cfg, workers=1):
    return run_experiment(_expect(cfg, "noisy_sparsity"), workers)


def run_noisy_measurement_sweep(cfg, workers=1):
    return run_experiment(_expect(cfg, "noisy_measurement"), workers)


@dataclass(frozen=True)
class AggregateRow:
    solver: str
    sweep_value: int
    trials: int
    recovery_probability: float
    mean_log10_error: float
    log10_std_error: float  # None when fewer than two finite errors
    mean_iterations: float


class AggregateResult:
    """Per (solver, sweep value) summaries in a stable order."""

    def __init__(self, rows, sweep_param="sweep", config=None):
        self.rows = list(rows)
        self.sweep_param = sweep_param
        self.config = config

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, AggregateResult):
            return NotImplemented
        return self.rows == other.rows and self.sweep_param == other.sweep_param

    @property
    def solvers(self):
        return list(dict.fromkeys(r.solver for r in self.rows))

    def series(self, solver, metric):
        rows = [r for r in self.rows if r.solver == solver]
        return [r.sweep_value for r in rows], [getattr(r, metric) for r in rows]

    def value(self, solver, sweep_value, metric):
        for r in self.rows:
            if r.solver == solver and r.sweep_value == sweep_value:
                return getattr(r, metric)
        raise KeyError((solver, sweep_value))

    def metrics(self):
        if self.config is not None and not self.config.noisy:
            return ("recovery_probability",)
        return ("mean_log10_error", "log10_std_error")

    def to_csv(self):
        lines = []
        if self.config is not None:
            from .config import format_config

            lines += ["# " + ln for ln in format_config(self.config).splitlines()]
        lines.append("solver,sweep_param,sweep_value,metric,value,trials,seed")
        seed = "" if self.config is None else str(self.config.seed)
        for metric in self.metrics():
            for r in self.rows:
                lines.append(
                    f"{r.solver},{self.sweep_param},{r.sweep_value},{metric},"
                    f"{_fmt(getattr(r, metric))},{r.trials},{seed}"
                )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text):
        """Rebuild an aggregate (metrics only) from ``to_csv`` output."""
        table = {}
        sweep_param = "sweep"
        solvers = []
        for line in text.splitlines():
            if not line.strip() or line.startswith("#") or line.startswith("solver,"):
                continue
            solver, sweep_param, value, metric, val, trials, _seed = line.split(",")
            key = (solver, int(value))
            if solver not in solvers:
                solvers.append(solver)
            table.setdefault(key, {"trials": int(trials)})[metric] = _parse(val)
        rows = []
        for solver in solvers:
            for (sv, value), d in sorted(table.items(), key=lambda kv: kv[0][1]):
                if sv != solver:
                    continue
                rows.append(
                    AggregateRow(
                        solver=solver,
                        sweep_value=value,
                        trials=d["trials"],
                        recovery_probability=d.get("recovery_probability", math.nan),
                        mean_log10_error=d.get("mean_log10_error", math.nan),
                        log10_std_error=d.get("log10_std_error", math.nan),
                        mean_iterations=math.nan,
                    )
                )
        return cls(rows, sweep_param)


def _fmt(v):
    if v is None:
        return "NA"
    v = float(v)
    if v == -math.inf:
        return "-inf"
    return repr(v)


def _parse(s):
    if s == "NA":
        return None
    return float(s)


def aggregate(results, cfg=None):
    """Group trial results by (solver, sweep value) and summarise.

    Errors are summarised on a log10 scale: the mean of log10(error) and
    log10 of the sample standard deviation (n - 1 denominator) of the raw
    errors. A zero spread is reported as -inf and a single trial as None.
    """
    results = list(results)
    if not results:
        raise ValueError("nothing to aggregate")
    groups = {}
    for r in results:
        groups.setdefault((r.solver, r.sweep_value), []).append(r)
    order = list(dict.fromkeys(r.solver for r in results))
    if cfg is not None:
        order = [s for s in cfg.solvers if s in order]
    rows = []
    for solver in order:
        for value in sorted({v for (sv, v) in groups if sv == solver}):
            group = sorted(groups[(solver, value)], key=lambda r: r.trial)
            errs = [r.error for r in group if math.isfinite(r.error)]
            if not errs:
                log.warning("no finite errors for %s at %s; log metrics omitted", solver, value)
            with np.errstate(divide="ignore"):
                mean_log = float(np.mean(np.log10(errs))) if errs else math.nan
            if len(errs) < 2:
                log_std = None
            else:
                sd = statistics.stdev(errs)
                log_std = math.log10(sd) if sd > 0 else -math.inf
            rows.append(
                AggregateRow(
                    solver=solver,
                    sweep_value=value,
                    trials=len(group),
                    recovery_probability=sum(r.recovered for r in group) / len(group),
                    mean_log10_error=mean_log,
                    log10_std_error=log_std,
                    mean_iterations=float(np.mean([r.iterations for r in group])),
                )
            )
    sweep_param = cfg.sweep_param if cfg is not None else "sweep"
    return AggregateResult(rows, sweep_param, cfg)


_M_SWEEP = tuple(range(1, 101))

PRESETS = {
    "fig1": ExperimentConfig(protocol="sparsity", m=(128,), s=(1,) + tuple(range(5, 65, 5))),
    "fig2": ExperimentConfig(protocol="measurement", m=_M_SWEEP, s=(25,)),
    "fig3": ExperimentConfig(protocol="noisy_sparsity", m=(128,), s=tuple(range(5, 55, 5)), sigma=0.01),
    "fig5": ExperimentConfig(protocol="noisy_measurement", m=_M_SWEEP, s=(25,), sigma=0.01),
}
PRESETS["fig4"] = PRESETS["fig3"]
PRESETS["fig6"] = PRESETS["fig5"]

PRESET_METRIC = {
    "fig1": "recovery_probability",
    "fig2": "recovery_probability",
    "fig3": "mean_log10_error",
    "fig4": "log10_std_error",
    "fig5": "mean_log10_error",
    "fig6": "log10_std_error",
}


def preset(name, **overrides):
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return replace(PRESETS[name], **overrides)


def config_dict(cfg):
    return {f.name: getattr(cfg, f.name) for f in fields(cfg)}


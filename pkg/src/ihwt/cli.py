"""Command-line front end.

Subcommands: project, solve, rip-estimate, count-partitions, experiment,
plot. Exit codes: 0 success, 1 usage error, 2 runtime error. Data goes to
stdout or files, everything else to stderr.
"""
import argparse
import logging
import math
import sys
from dataclasses import replace

import numpy as np

from .combinatorics import count_supports, distinct_partitions
from .config import ConfigError, parse_config, parse_value
from .core import UnsupportedWeightsError, WeightVector, as_weights
from .experiments import (
    PRESET_METRIC,
    PRESETS,
    PROTOCOLS,
    AggregateResult,
    ExperimentConfig,
    run_experiment,
)
from .plot import emit_plot
from .sensing import gaussian_matrix, rip_constant
from .signal_models import block_weights, gaussian_noise, power_law_signal, random_power_law_params
from .solvers import SolverConfig, cosamp, ihwt, iht, omp
from .thresholding import (
    exact_weighted_support,
    hard_threshold_support,
    projection_error,
    surrogate_weighted_support,
)

__all__ = ["main", "parse_weights", "build_parser"]

log = logging.getLogger("ihwt")

# published distinct-partition counts used as reference points
REFERENCE_COUNTS = {100: 444794, 1000: 8635565795744155161506}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _info(msg):
    print(msg, file=sys.stderr)


def _floats(text):
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def parse_weights(spec, n):
    """Weights from ``1,2,3`` (inline), ``sqrt`` (w_j = sqrt(j)) or ``blocks:s``."""
    spec = spec.strip()
    if spec == "sqrt":
        return WeightVector.sqrt_index(n)
    if spec.startswith("blocks:"):
        return block_weights(n, int(spec.split(":", 1)[1]))
    return as_weights(_floats(spec), n)


def _load_array(path):
    if path.endswith(".npy"):
        return np.load(path)
    return np.loadtxt(path, delimiter=",", ndmin=1)


def _fmt_vec(x):
    return ",".join(repr(float(v)) for v in x)


def cmd_project(args):
    if (args.signal is None) == (args.signal_file is None):
        raise UsageError("give exactly one of --signal and --signal-file")
    x = args.signal if args.signal is not None else np.atleast_1d(_load_array(args.signal_file))
    w = parse_weights(args.weights, x.size)
    if args.mode == "surrogate":
        supp = surrogate_weighted_support(x, w, args.s)
    elif args.mode == "hard":
        supp = hard_threshold_support(x, int(args.s))
    else:
        mode = "exact_dp" if args.mode == "exact" else args.mode
        try:
            supp = exact_weighted_support(x, w, args.s, mode)
        except UnsupportedWeightsError:
            if args.mode != "exact":
                raise
            supp = exact_weighted_support(x, w, args.s, "exact_enum")
    z = np.zeros_like(x)
    z[supp] = x[supp]
    print("0-indexed support: " + ",".join(str(int(j)) for j in supp))
    print("1-indexed support: " + ",".join(str(int(j) + 1) for j in supp))
    print("approximation: " + _fmt_vec(z))
    print(f"error: {projection_error(x, z):.12g}")
    return 0


def _instance(args):
    if args.matrix:
        a = np.atleast_2d(_load_array(args.matrix))
        if not args.measurements:
            raise UsageError("--matrix needs --measurements")
        y = _load_array(args.measurements)
        return a, y, None
    if args.seed is None:
        raise UsageError("random instances need --seed")
    ss = np.random.SeedSequence(args.seed)
    mat_seed, sig_seed, noise_seed = ss.spawn(3)
    a = gaussian_matrix(args.m, args.n, mat_seed, "spectral", args.spectral_norm)
    x = power_law_signal(random_power_law_params(sig_seed, args.n))
    y = a @ x + gaussian_noise(args.m, args.sigma, noise_seed)
    return a, y, x


def _write_trace(trace, path):
    """Per-iteration objective, residual and 1-based support."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("iteration,objective,residual_norm,support\n")
        for n, (obj, rn, supp) in enumerate(zip(trace.objectives, trace.residual_norms, trace.supports)):
            fh.write(f"{n},{obj!r},{rn!r},{' '.join(str(int(j) + 1) for j in supp)}\n")


def cmd_solve(args):
    a, y, x = _instance(args)
    n = a.shape[1]
    cfg = SolverConfig(max_iters=args.max_iters, halt_tol=args.halt_tol, projection=args.projection,
                       store_iterates=False)
    s = args.s
    if args.solver == "ihwt":
        w = parse_weights(args.weights or f"blocks:{int(s)}", n)
        trace = ihwt(a, y, w, s, cfg)
    elif args.solver == "iht":
        trace = iht(a, y, int(s), cfg)
    elif args.solver == "cosamp":
        trace = cosamp(a, y, int(s), cfg)
    else:
        trace = omp(a, y, int(s), cfg)
    _info(f"{args.solver}: {trace.iterations} iterations, converged={trace.converged}, "
          f"diverged={trace.diverged}, residual={trace.residual_norms[-1]:.6g}")
    if x is not None:
        _info(f"distance to generating signal: {np.linalg.norm(trace.x - x):.6g}")
    if args.trace:
        _write_trace(trace, args.trace)
    out = _fmt_vec(trace.x)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def cmd_rip(args):
    if args.matrix:
        a = np.atleast_2d(_load_array(args.matrix))
    else:
        if args.seed is None:
            raise UsageError("random matrices need --seed")
        a = gaussian_matrix(args.m, args.n, args.seed)
    w = None if args.weights is None else parse_weights(args.weights, a.shape[1])
    est = rip_constant(a, w, args.s)
    print(f"delta: {est.delta!r}")
    _info(f"{est.kind} order {est.order:g}, {est.supports_checked} maximal supports checked")
    return 0


def cmd_count(args):
    s = args.s
    n = args.n if args.n is not None else max(int(s), 1)
    w = parse_weights(args.weights, n)
    mode = "at_most" if args.at_most else "exact"
    count = count_supports(w, s, mode=mode)
    print(count)
    if args.weights == "sqrt" and mode == "exact" and float(s).is_integer() and n >= s:
        s_int = int(s)
        check = distinct_partitions(s_int)
        _info(f"independent pentagonal recurrence: {check} ({'agrees' if check == count else 'DISAGREES'})")
        ref = REFERENCE_COUNTS.get(s_int)
        if ref is not None:
            diff = count - ref
            note = "matches" if diff == 0 else f"differs by {diff:+d}"
            _info(f"published reference value {ref:,}: computed count {note}")
    return 0


def _experiment_config(args):
    proto = args.protocol
    if proto in PRESETS:
        base = PRESETS[proto]
    elif proto in PROTOCOLS:
        base = ExperimentConfig(protocol=proto, sigma=0.01 if proto.startswith("noisy") else 0.0)
    elif args.config:
        base = ExperimentConfig()
    else:
        raise UsageError("experiment needs --protocol or --config")
    overrides = {"seed": args.seed}
    for flag, key in (("trials", "trials"), ("m", "m"), ("s", "s"), ("n", "N"),
                      ("sigma", "sigma"), ("solvers", "solvers"), ("projection", "projection")):
        val = getattr(args, flag)
        if val is None:
            continue
        try:
            name, parsed = parse_value(key, str(val))
        except ValueError as exc:
            raise UsageError(f"--{flag}: {exc}") from None
        overrides[name] = parsed
    if args.config:
        return parse_config(args.config, base, overrides)
    return replace(base, **overrides)


def cmd_experiment(args):
    cfg = _experiment_config(args)
    _info(f"running {cfg.protocol} sweep over {cfg.sweep_param}={list(cfg.sweep_values)} "
          f"with {cfg.trials} trials, seed {cfg.seed}")
    agg = run_experiment(cfg, workers=args.threads)
    text = agg.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        _info(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    if args.plot:
        metric = args.metric or PRESET_METRIC.get(args.protocol) or agg.metrics()[0]
        emit_plot(agg, args.plot, metric)
        _info(f"wrote {args.plot}")
    return 0


def cmd_plot(args):
    with open(args.csv, encoding="utf-8") as fh:
        agg = AggregateResult.from_csv(fh.read())
    if len(agg) == 0:
        raise ValueError(f"{args.csv} holds no rows")
    metric = args.metric
    if metric is None:
        noiseless = all(math.isnan(r.mean_log10_error) for r in agg.rows)
        metric = "recovery_probability" if noiseless else "mean_log10_error"
    emit_plot(agg, args.out, metric)
    _info(f"wrote {args.out}")
    return 0


def build_parser():
    p = _Parser(prog="ihwt", description="Weighted sparse recovery toolkit.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    q = sub.add_parser("project", help="weighted or plain hard thresholding of a vector")
    q.add_argument("--signal", type=_floats, help="comma-separated values")
    q.add_argument("--signal-file", help="CSV or .npy file with the signal")
    q.add_argument("--weights", default="1")
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--mode", choices=("exact", "exact_dp", "exact_enum", "surrogate", "hard"), default="exact")
    q.set_defaults(func=cmd_project)

    def instance_flags(q):
        q.add_argument("--matrix", help="CSV or .npy file with the sensing matrix")
        q.add_argument("--measurements", help="CSV or .npy file with y")
        q.add_argument("--seed", type=int)
        q.add_argument("--m", type=int, default=128)
        q.add_argument("--n", type=int, default=256)

    q = sub.add_parser("solve", help="run one solver on a given or random instance")
    instance_flags(q)
    q.add_argument("--solver", choices=("ihwt", "iht", "cosamp", "omp"), default="ihwt")
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--weights", help="defaults to blocks:s")
    q.add_argument("--sigma", type=float, default=0.0)
    q.add_argument("--spectral-norm", type=float, default=0.99)
    q.add_argument("--projection", choices=("exact_dp", "exact_enum", "surrogate"), default="surrogate")
    q.add_argument("--max-iters", type=int, default=500)
    q.add_argument("--halt-tol", type=float, default=1e-10)
    q.add_argument("--out", help="write the estimate here instead of stdout")
    q.add_argument("--trace", help="write the per-iteration trace as CSV")
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("rip-estimate", help="restricted isometry constant by enumeration")
    instance_flags(q)
    q.set_defaults(m=10, n=16)
    q.add_argument("--weights", help="omit for the unweighted constant")
    q.add_argument("--s", type=float, required=True)
    q.set_defaults(func=cmd_rip)

    q = sub.add_parser("count-partitions", help="count supports of a given weighted size")
    q.add_argument("--weights", default="sqrt")
    q.add_argument("--s", type=float, required=True)
    q.add_argument("--n", type=int, help="number of atoms (default: s)")
    q.add_argument("--at-most", action="store_true", help="count supports with weight <= s")
    q.set_defaults(func=cmd_count)

    q = sub.add_parser("experiment", help="run a recovery experiment and write CSV")
    q.add_argument("--protocol", choices=sorted(PRESETS) + list(PROTOCOLS), default=None)
    q.add_argument("--config", help="key = value configuration file")
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--trials", type=int)
    q.add_argument("--m")
    q.add_argument("--s")
    q.add_argument("--n", type=int)
    q.add_argument("--sigma", type=float)
    q.add_argument("--solvers")
    q.add_argument("--projection", choices=("exact_dp", "exact_enum", "surrogate"))
    q.add_argument("--threads", type=int, default=1, help="worker processes")
    q.add_argument("--out")
    q.add_argument("--plot", help="also write an SVG chart here")
    q.add_argument("--metric", choices=("recovery_probability", "mean_log10_error", "log10_std_error"))
    q.set_defaults(func=cmd_experiment)

    q = sub.add_parser("plot", help="SVG chart from an experiment CSV")
    q.add_argument("--csv", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--metric", choices=("recovery_probability", "mean_log10_error", "log10_std_error"))
    q.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        _info(str(exc))
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    except (ConfigError, ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        _info(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())

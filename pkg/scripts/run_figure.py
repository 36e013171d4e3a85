"""Run one experiment preset and write its CSV and SVG.

    python scripts/run_figure.py fig2 --seed 7 --trials 200 --outdir results
"""
import argparse
import sys
import time
from pathlib import Path

from ihwt.experiments import PRESET_METRIC, PRESETS, preset, run_experiment
from ihwt.plot import emit_plot


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--outdir", default="results")
    args = p.parse_args(argv)

    cfg = preset(args.name, seed=args.seed, trials=args.trials)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    agg = run_experiment(cfg, workers=args.workers)
    (out / f"{args.name}.csv").write_text(agg.to_csv())
    emit_plot(agg, out / f"{args.name}.svg", PRESET_METRIC[args.name])
    print(f"{args.name}: {len(agg)} rows in {time.perf_counter() - t0:.1f}s -> {out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

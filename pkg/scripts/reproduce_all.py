"""Run every experiment preset.

Presets that share a sweep (fig3/fig4 and fig5/fig6) are computed once and
plotted with both metrics. Full runs take a while; ``--trials 20`` gives a
quick preview.
"""
import argparse
import sys
import time
from pathlib import Path

from ihwt.experiments import PRESET_METRIC, preset, run_experiment
from ihwt.plot import emit_plot

GROUPS = (("fig1",), ("fig2",), ("fig3", "fig4"), ("fig5", "fig6"))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--outdir", default="results")
    args = p.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for group in GROUPS:
        t0 = time.perf_counter()
        agg = run_experiment(preset(group[0], seed=args.seed, trials=args.trials), workers=args.workers)
        for name in group:
            (out / f"{name}.csv").write_text(agg.to_csv())
            emit_plot(agg, out / f"{name}.svg", PRESET_METRIC[name])
        print(f"{'/'.join(group)} done in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

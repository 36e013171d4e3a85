"""Minimal standalone SVG line charts of aggregate results."""
import hashlib
import math

__all__ = ["emit_plot", "render_svg", "solver_color"]

_PALETTE = {
    "ihwt": "#d62728",
    "iht": "#1f77b4",
    "cosamp": "#2ca02c",
    "omp": "#9467bd",
}

_LABELS = {
    "recovery_probability": "recovery probability",
    "mean_log10_error": "mean log10 normalized error",
    "log10_std_error": "log10 std of normalized error",
}

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 130, 20, 50


def solver_color(name):
    """Fixed colour for known solvers, hash-derived for anything else."""
    if name in _PALETTE:
        return _PALETTE[name]
    return "#" + hashlib.sha256(name.encode()).hexdigest()[:6]


def _num(v):
    return f"{v:.2f}"


def _ticks(lo, hi, k=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def render_svg(agg, metric):
    """SVG text for ``metric`` against the sweep value, one series per solver."""
    series = []
    for solver in agg.solvers:
        xs, ys = agg.series(solver, metric)
        pts = [(float(x), float(y)) for x, y in zip(xs, ys) if y is not None and math.isfinite(y)]
        if pts:
            series.append((solver, pts))
    if not series:
        raise ValueError(f"nothing to plot for metric {metric!r}")
    allx = [p[0] for _, pts in series for p in pts]
    ally = [p[1] for _, pts in series for p in pts]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def py(y):
        return TOP + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<text x="{_num(px(t))}" y="{TOP + ph + 16}" font-size="11" '
                   f'text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{LEFT - 6}" y="{_num(py(t) + 4)}" font-size="11" '
                   f'text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{H - 12}" font-size="13" '
               f'text-anchor="middle">{agg.sweep_param}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.1f}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:.1f})">{_LABELS.get(metric, metric)}</text>')
    for k, (solver, pts) in enumerate(series):
        color = solver_color(solver)
        if len(pts) > 1:
            coords = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        else:
            x, y = pts[0]
            out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="4" fill="{color}"/>')
        ly = TOP + 14 + 18 * k
        out.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{W - RIGHT + 36}" y="{ly + 4}" font-size="12">{solver}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(agg, out_path, metric=None):
    """Write an SVG chart of ``agg`` to ``out_path``."""
    if agg is None or len(agg) == 0:
        raise ValueError("cannot plot an empty aggregate")
    if metric is None:
        metric = agg.metrics()[0]
    text = render_svg(agg, metric)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return out_path

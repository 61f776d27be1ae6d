"""CSV and SVG emission for suite results."""

from __future__ import annotations

import csv
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .diagnostics import audit_delays

LONG_COLUMNS = ["algorithm", "trial", "t", "round", "chosen_index", "inst_regret", "cum_regret", "arrived_at"]
SUMMARY_COLUMNS = ["algorithm", "t", "mean_cum_regret", "half_std"]
ROUND_COLUMNS = [
    "algorithm", "trial", "round", "q", "length", "n_candidates", "n_arrived",
    "beta", "max_sd", "var_sum", "info_gain", "var_sum_ok", "shrink_ok", "x_star_kept",
]
TRIAL_COLUMNS = ["algorithm", "trial", "final_regret", "delay_violations", "delay_violation_fraction"]


def _f(x) -> str:
    return repr(float(x))


def _writer(path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def write_long(traces: dict, path) -> None:
    fh, w = _writer(path)
    with fh:
        w.writerow(LONG_COLUMNS)
        for algo, trs in traces.items():
            for i, tr in enumerate(trs):
                cum = tr.cum_regret
                for s in range(len(tr)):
                    w.writerow([
                        algo, i, s + 1, int(tr.round[s]), int(tr.chosen[s]),
                        _f(tr.inst_regret[s]), _f(cum[s]), int(tr.arrival[s]),
                    ])


def write_summary(curves: dict, path) -> None:
    fh, w = _writer(path)
    with fh:
        w.writerow(SUMMARY_COLUMNS)
        for algo, c in curves.items():
            for s in range(len(c.mean)):
                w.writerow([algo, s + 1, _f(c.mean[s]), _f(c.half_std[s])])


def write_rounds(traces: dict, path) -> None:
    fh, w = _writer(path)
    with fh:
        w.writerow(ROUND_COLUMNS)
        for algo, trs in traces.items():
            for i, tr in enumerate(trs):
                for rr in tr.rounds:
                    w.writerow([
                        algo, i, rr.r, rr.q, rr.length, rr.n_candidates, rr.n_arrived,
                        _f(rr.beta), _f(rr.max_sd), _f(rr.var_sum), _f(rr.gain_q),
                        int(rr.var_sum_ok), "" if rr.shrink_ok is None else int(rr.shrink_ok),
                        int(tr.x_star in rr.survivors),
                    ])


def write_trials(traces: dict, delay_params, delta: float, path, combine: str = "min") -> None:
    fh, w = _writer(path)
    with fh:
        w.writerow(TRIAL_COLUMNS)
        for algo, trs in traces.items():
            for i, tr in enumerate(trs):
                a = audit_delays(tr, delay_params, delta, combine)
                w.writerow([algo, i, _f(tr.final_regret), a.violations, _f(a.fraction)])


def emit_csv(result, out_dir) -> dict:
    """Write traces.csv (long format), summary.csv, rounds.csv and trials.csv into ``out_dir``.

    ``result`` is a SuiteResult or ``None`` (header-only files).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traces = {} if result is None else result.traces
    curves = {} if result is None else result.curves
    paths = {k: out / f"{k}.csv" for k in ("traces", "summary", "rounds", "trials")}
    write_long(traces, paths["traces"])
    write_summary(curves, paths["summary"])
    write_rounds(traces, paths["rounds"])
    if result is None:
        write_trials({}, None, 0.1, paths["trials"])
    else:
        cfg = result.config
        write_trials(traces, cfg.delay.params(), cfg.delta, paths["trials"], cfg.psi_combine)
    return paths


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _nice_max(v: float) -> float:
    if v <= 0:
        return 1.0
    mag = 10 ** np.floor(np.log10(v))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= v:
            return float(m * mag)
    return float(10 * mag)


def emit_svg(curves: dict, path, title: str = "cumulative regret", width: int = 640, height: int = 400) -> None:
    """Line chart of mean cumulative regret against t with shaded half-std bands."""
    ml, mr, mt, mb = 64, 150, 32, 48
    pw, ph = width - ml - mr, height - mt - mb
    n_max = max((len(c.mean) for c in curves.values()), default=1)
    y_top = _nice_max(max((float(np.max(c.mean + c.half_std)) for c in curves.values() if len(c.mean)), default=0.0))

    def sx(t):
        return ml + pw * (t - 1) / max(n_max - 1, 1)

    def sy(v):
        return mt + ph * (1.0 - v / y_top)

    def pts(ts, vs):
        return " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in zip(ts, vs))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{ml + pw / 2:.1f}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">'
        f"{escape(title)}</text>",
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        v = frac * y_top
        parts.append(
            f'<text x="{ml - 6}" y="{sy(v) + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="10">{v:g}</text>'
        )
        t = 1 + frac * (n_max - 1)
        parts.append(
            f'<text x="{sx(t):.2f}" y="{mt + ph + 16}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="10">{int(round(t))}</text>'
        )
    parts.append(
        f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12">t</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {mt + ph / 2:.1f})">cumulative regret</text>'
    )
    for i, (name, c) in enumerate(curves.items()):
        col = _PALETTE[i % len(_PALETTE)]
        ts = np.arange(1, len(c.mean) + 1)
        # thin long curves to at most ~600 vertices
        step = max(1, len(ts) // 600)
        idx = np.unique(np.r_[np.arange(0, len(ts), step), len(ts) - 1]) if len(ts) else np.zeros(0, int)
        ts_s, m_s, h_s = ts[idx], c.mean[idx], c.half_std[idx]
        if len(ts_s):
            band = pts(ts_s, m_s + h_s) + " " + pts(ts_s[::-1], (m_s - h_s)[::-1])
            parts.append(f'<polygon points="{band}" fill="{col}" fill-opacity="0.2" stroke="none"/>')
            parts.append(f'<polyline points="{pts(ts_s, m_s)}" fill="none" stroke="{col}" stroke-width="1.5"/>')
        ly = mt + 16 * (i + 1)
        parts.append(f'<line x1="{ml + pw + 12}" y1="{ly}" x2="{ml + pw + 32}" y2="{ly}" stroke="{col}" stroke-width="2"/>')
        parts.append(
            f'<text x="{ml + pw + 38}" y="{ly + 4}" font-family="sans-serif" font-size="11" class="legend">'
            f"{escape(name)}</text>"
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


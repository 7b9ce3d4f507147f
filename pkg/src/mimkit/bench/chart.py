"""Static SVG line charts: metric mean vs swept parameter, one series per pipeline."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .report import Summary

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 30, 50


def _series(summary: Summary, x_key: str) -> dict[str, list[tuple[float, float, float]]]:
    if "pipeline_id" not in summary.group_by or x_key not in summary.group_by:
        raise ValueError(f"summary must be grouped by pipeline_id and {x_key!r}")
    out: dict[str, list] = {}
    for row in summary.rows:
        x = row[x_key]
        if x is None:
            raise ValueError(f"rows without a {x_key!r} value cannot be charted")
        out.setdefault(row["pipeline_id"], []).append((float(x), row["mean"], row["sem"]))
    for pts in out.values():
        pts.sort()
    return out


def render_svg(summary: Summary, x_key: str = "lambda", x_label: str | None = None,
               y_label: str = "test metric") -> str:
    series = _series(summary, x_key)
    if not series:
        raise ValueError("nothing to chart: summary is empty")
    xs = [x for pts in series.values() for x, _, _ in pts]
    lo = [m - s for pts in series.values() for _, m, s in pts]
    hi = [m + s for pts in series.values() for _, m, s in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(lo), max(hi)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return TOP + (y1 - y) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        parts.append(f'<text x="{sx(xv):.1f}" y="{TOP + ph + 18}" font-size="11" '
                     f'text-anchor="middle">{xv:.3g}</text>')
        parts.append(f'<text x="{LEFT - 6}" y="{sy(yv) + 4:.1f}" font-size="11" '
                     f'text-anchor="end">{yv:.4g}</text>')
    parts.append(f'<text x="{LEFT + pw / 2}" y="{H - 10}" font-size="13" text-anchor="middle">'
                 f'{escape(x_label or x_key)}</text>')
    parts.append(f'<text x="16" y="{TOP + ph / 2}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 16 {TOP + ph / 2})">{escape(y_label)}</text>')
    for k, (pid, pts) in enumerate(sorted(series.items())):
        color = PALETTE[k % len(PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(m):.2f}" for x, m, _ in pts)
        parts.append(f'<g class="series" data-pipeline="{escape(pid)}">')
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, m, s in pts:
            parts.append(f'<line class="sem" x1="{sx(x):.2f}" y1="{sy(m - s):.2f}" x2="{sx(x):.2f}" '
                         f'y2="{sy(m + s):.2f}" stroke="{color}"/>')
        parts.append("</g>")
        ly = TOP + 16 * k + 8
        parts.append(f'<text x="{LEFT + pw + 12}" y="{ly}" font-size="12" fill="{color}">{escape(pid)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_chart(summary: Summary, path, x_key: str = "lambda", x_label: str | None = None,
               y_label: str = "test metric") -> None:
    svg = render_svg(summary, x_key, x_label, y_label)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(svg, encoding="utf-8")

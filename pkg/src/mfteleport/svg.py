"""Self-contained SVG line charts for sweep output."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

PALETTE = ("#d62728", "#2ca02c", "#1f77b4", "#e6b800", "#9467bd")


def line_chart(
    x: Sequence[float],
    series: dict[str, Sequence[float]],
    xlabel: str = "",
    ylabel: str = "",
    width: int = 480,
    height: int = 320,
) -> str:
    pad_l, pad_r, pad_t, pad_b = 50, 110, 15, 40
    pw, ph = width - pad_l - pad_r, height - pad_t - pad_b
    finite = [v for ys in series.values() for v in ys if v == v]
    y_lo = min(0.0, min(finite, default=0.0))
    y_hi = max(1.0, max(finite, default=1.0))
    x_lo, x_hi = min(x), max(x)
    x_span = (x_hi - x_lo) or 1.0

    def sx(v):
        return pad_l + (v - x_lo) / x_span * pw

    def sy(v):
        return pad_t + (y_hi - v) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect x="{pad_l}" y="{pad_t}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(5):
        yv = y_lo + k * (y_hi - y_lo) / 4
        xv = x_lo + k * x_span / 4
        out.append(f'<text x="{pad_l - 5}" y="{sy(yv) + 4:.1f}" text-anchor="end">{yv:.2g}</text>')
        out.append(f'<text x="{sx(xv):.1f}" y="{pad_t + ph + 15}" text-anchor="middle">{xv:.2g}</text>')
    out.append(f'<text x="{pad_l + pw / 2}" y="{height - 5}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="12" y="{pad_t + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 12 {pad_t + ph / 2})">{escape(ylabel)}</text>'
    )
    for n, (name, ys) in enumerate(series.items()):
        color = PALETTE[n % len(PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, ys) if b == b)
        if pts:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = pad_t + 12 + 16 * n
        out.append(f'<line x1="{pad_l + pw + 10}" y1="{ly}" x2="{pad_l + pw + 30}" y2="{ly}" stroke="{color}"/>')
        out.append(f'<text x="{pad_l + pw + 35}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Tiny dependency-free SVG charts (polylines and scatter points)."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")

Series = tuple[str, Sequence[float], Sequence[float]]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.3g}"


class _Frame:
    def __init__(self, series: Sequence[Series], width: int, height: int, margin: int = 60):
        xs = [float(x) for _, sx, _ in series for x in sx]
        ys = [float(y) for _, _, sy in series for y in sy]
        if not xs:
            xs, ys = [0.0, 1.0], [0.0, 1.0]
        self.x0, self.x1 = _padded(min(xs), max(xs))
        self.y0, self.y1 = _padded(min(ys), max(ys))
        self.width, self.height, self.margin = width, height, margin

    def px(self, x: float) -> float:
        span = self.width - 2 * self.margin
        return self.margin + (x - self.x0) / (self.x1 - self.x0) * span

    def py(self, y: float) -> float:
        span = self.height - 2 * self.margin
        return self.height - self.margin - (y - self.y0) / (self.y1 - self.y0) * span


def _padded(lo: float, hi: float) -> tuple[float, float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return 0.0, 1.0
    if hi - lo < 1e-12:
        return lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _axes(f: _Frame, title: str, xlabel: str, ylabel: str) -> list[str]:
    m, w, h = f.margin, f.width, f.height
    out = [
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{m}" y1="{h - m}" x2="{w - m}" y2="{h - m}" stroke="black"/>',
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{h - m}" stroke="black"/>',
        f'<text x="{w / 2}" y="{m / 2}" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<text x="{w / 2}" y="{h - 15}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="15" y="{h / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {h / 2})">{escape(ylabel)}</text>',
    ]
    for i in range(5):
        xv = f.x0 + (f.x1 - f.x0) * i / 4
        yv = f.y0 + (f.y1 - f.y0) * i / 4
        out.append(
            f'<text x="{_fmt(f.px(xv))}" y="{h - m + 15}" text-anchor="middle" font-size="10">{_tick(xv)}</text>'
        )
        out.append(
            f'<text x="{m - 5}" y="{_fmt(f.py(yv) + 3)}" text-anchor="end" font-size="10">{_tick(yv)}</text>'
        )
    return out


def _legend(f: _Frame, labels: Sequence[str]) -> list[str]:
    out = []
    for i, label in enumerate(labels):
        y = f.margin + 14 * i
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<rect x="{f.width - f.margin - 110}" y="{y - 8}" width="10" height="10" fill="{color}"/>')
        out.append(f'<text x="{f.width - f.margin - 95}" y="{y + 1}" font-size="10">{escape(label)}</text>')
    return out


def _document(f: _Frame, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{f.width}" height="{f.height}" '
        f'viewBox="0 0 {f.width} {f.height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def line_chart(
    series: Sequence[Series], title: str, xlabel: str, ylabel: str, width: int = 640, height: int = 420
) -> str:
    f = _Frame(series, width, height)
    body = _axes(f, title, xlabel, ylabel)
    for i, (_, xs, ys) in enumerate(series):
        pts = " ".join(f"{_fmt(f.px(x))},{_fmt(f.py(y))}" for x, y in zip(xs, ys))
        body.append(
            f'<polyline fill="none" stroke="{PALETTE[i % len(PALETTE)]}" stroke-width="1.5" points="{pts}"/>'
        )
    body += _legend(f, [s[0] for s in series])
    return _document(f, body)


def scatter_chart(
    series: Sequence[Series],
    title: str,
    xlabel: str,
    ylabel: str,
    diagonal: bool = True,
    width: int = 520,
    height: int = 520,
) -> str:
    f = _Frame(series, width, height)
    if diagonal:
        # equal ranges so y = x is a true diagonal
        lo, hi = min(f.x0, f.y0), max(f.x1, f.y1)
        f.x0 = f.y0 = lo
        f.x1 = f.y1 = hi
    body = _axes(f, title, xlabel, ylabel)
    if diagonal:
        body.append(
            f'<line x1="{_fmt(f.px(f.x0))}" y1="{_fmt(f.py(f.y0))}" x2="{_fmt(f.px(f.x1))}" '
            f'y2="{_fmt(f.py(f.y1))}" stroke="gray" stroke-dasharray="4 3"/>'
        )
    for i, (_, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        for x, y in zip(xs, ys):
            body.append(f'<circle cx="{_fmt(f.px(x))}" cy="{_fmt(f.py(y))}" r="2.5" fill="{color}"/>')
    body += _legend(f, [s[0] for s in series])
    return _document(f, body)

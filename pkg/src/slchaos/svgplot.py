"""Minimal deterministic SVG line plots.

Hand-rolled on purpose: the output must be byte-identical across runs and
machines, so no plotting library sits between the numbers and the file.
Fixed 800x600 canvas, 10% margins, coordinates rounded to hundredths of a
pixel, axis lines with min/max tick labels, and a small legend when curves
are labeled.  A curve that degenerates to a single point (or to zero
extent) is drawn as a dot marker instead of a polyline.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["Curve", "export_svg", "COMPARE_COLORS", "DEFAULT_COLOR", "isometric_projection"]

WIDTH = 800
HEIGHT = 600
DEFAULT_COLOR = "#2c6fbb"
# Overlay palette; the first three (green, red, blue) are the documented
# colors for multi-scenario comparisons, the rest cover longer lists.
COMPARE_COLORS = ("#008000", "#d00000", "#0000cc", "#805090", "#c07818", "#108888")


@dataclass(frozen=True)
class Curve:
    label: str
    x: np.ndarray
    y: np.ndarray
    color: str = DEFAULT_COLOR

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size == 0:
            raise ValueError(f"curve {self.label!r}: x and y must be equal-length 1-D, non-empty")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError(f"curve {self.label!r} contains non-finite points")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def isometric_projection(states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Project (N, 3) states onto a fixed isometric view plane.

    u spreads x against y, v mixes their mean with height, giving the usual
    corner-on view of an attractor without any perspective parameters.
    """
    st = np.asarray(states, dtype=float)
    u = (st[:, 0] - st[:, 1]) * (np.sqrt(3.0) / 2.0)
    v = (st[:, 0] + st[:, 1]) * 0.5 - st[:, 2]
    return u, v


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.6g}"


def export_svg(
    curves: list[Curve] | tuple[Curve, ...],
    path: str | Path,
    *,
    x_label: str,
    y_label: str,
    title: str = "",
) -> Path:
    if not curves:
        raise ValueError("export_svg needs at least one curve")
    path = Path(path)

    xmin = min(float(c.x.min()) for c in curves)
    xmax = max(float(c.x.max()) for c in curves)
    ymin = min(float(c.y.min()) for c in curves)
    ymax = max(float(c.y.max()) for c in curves)
    if xmax == xmin:
        xmin, xmax = xmin - 1.0, xmax + 1.0
    if ymax == ymin:
        ymin, ymax = ymin - 1.0, ymax + 1.0

    mx0, mx1 = 0.1 * WIDTH, 0.9 * WIDTH
    my0, my1 = 0.1 * HEIGHT, 0.9 * HEIGHT
    sx = (mx1 - mx0) / (xmax - xmin)
    sy = (my1 - my0) / (ymax - ymin)

    def px(v: float) -> float:
        return mx0 + (v - xmin) * sx

    def py(v: float) -> float:
        return my1 - (v - ymin) * sy

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    parts.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    axis = f'stroke="#404040" stroke-width="1"'
    parts.append(
        f'<line x1="{_fmt(mx0)}" y1="{_fmt(my0)}" x2="{_fmt(mx0)}" y2="{_fmt(my1)}" {axis}/>'
    )
    parts.append(
        f'<line x1="{_fmt(mx0)}" y1="{_fmt(my1)}" x2="{_fmt(mx1)}" y2="{_fmt(my1)}" {axis}/>'
    )
    text = 'font-family="monospace" font-size="12" fill="#202020"'
    parts.append(
        f'<text x="{_fmt(mx0)}" y="{_fmt(my1 + 16)}" {text}>{_tick(xmin)}</text>'
    )
    parts.append(
        f'<text x="{_fmt(mx1)}" y="{_fmt(my1 + 16)}" text-anchor="end" {text}>{_tick(xmax)}</text>'
    )
    parts.append(
        f'<text x="{_fmt(mx0 - 6)}" y="{_fmt(my1)}" text-anchor="end" {text}>{_tick(ymin)}</text>'
    )
    parts.append(
        f'<text x="{_fmt(mx0 - 6)}" y="{_fmt(my0 + 10)}" text-anchor="end" {text}>{_tick(ymax)}</text>'
    )
    parts.append(
        f'<text x="{_fmt((mx0 + mx1) / 2)}" y="{_fmt(HEIGHT - 12)}" text-anchor="middle" '
        f"{text}>{x_label}</text>"
    )
    parts.append(
        f'<text x="16" y="{_fmt((my0 + my1) / 2)}" text-anchor="middle" {text} '
        f'transform="rotate(-90 16 {_fmt((my0 + my1) / 2)})">{y_label}</text>'
    )
    if title:
        parts.append(
            f'<text x="{_fmt((mx0 + mx1) / 2)}" y="{_fmt(my0 - 10)}" text-anchor="middle" '
            f"{text}>{title}</text>"
        )

    for c in curves:
        if c.x.size == 1 or (float(c.x.min()) == float(c.x.max()) and float(c.y.min()) == float(c.y.max())):
            parts.append(
                f'<circle cx="{_fmt(px(float(c.x[0])))}" cy="{_fmt(py(float(c.y[0])))}" '
                f'r="3" fill="{c.color}"/>'
            )
            continue
        coords = " ".join(f"{_fmt(px(float(a)))},{_fmt(py(float(b)))}" for a, b in zip(c.x, c.y))
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{c.color}" stroke-width="1"/>'
        )

    labeled = [c for c in curves if c.label]
    if labeled:
        for i, c in enumerate(labeled):
            ly = my0 + 14 + 16 * i
            parts.append(
                f'<line x1="{_fmt(mx1 - 150)}" y1="{_fmt(ly - 4)}" x2="{_fmt(mx1 - 126)}" '
                f'y2="{_fmt(ly - 4)}" stroke="{c.color}" stroke-width="2"/>'
            )
            parts.append(f'<text x="{_fmt(mx1 - 120)}" y="{_fmt(ly)}" {text}>{c.label}</text>')

    parts.append("</svg>")
    path.write_bytes(("\n".join(parts) + "\n").encode("ascii"))
    return path

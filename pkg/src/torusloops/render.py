"""SVG pictures of the cycles of a field, one unit square per vertex.

Each cycle becomes a single path drawn between vertex centers, colored from
a fixed palette in anchor order. An edge that wraps the torus is split into
an exit stub and an entry stub (two subpaths), so a class-(p, q) cycle
crosses the left seam p times and the bottom seam q times. Origin is the
bottom-left corner with y growing upward, as in the lattice pictures.
"""

from __future__ import annotations

import io
from xml.sax.saxutils import quoteattr

from .census import CycleCensus
from .exact import CapExceededError
from .sampler import StepField

RENDER_GUARD_VERTICES = 4_000_000

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def _fmt(x: float) -> str:
    s = f"{x:.1f}"
    return s[:-2] if s.endswith(".0") else s


def _cycle_path(field: StepField, anchor: int) -> tuple[str, int, int]:
    """Path data for one cycle plus its seam-crossing counts (left, bottom)."""
    dims = field.dims
    n, m = dims.n, dims.m
    parts = []
    left = bottom = 0
    v = anchor
    x, y = dims.coords(v)
    parts.append(f"M{_fmt(x + 0.5)} {_fmt(m - y - 0.5)}")
    while True:
        east = field.directions[v] == 0
        w = field.phi(v)
        wx, wy = dims.coords(w)
        cx, cy = wx + 0.5, m - wy - 0.5
        if east and x == n - 1:
            left += 1
            parts.append(f"L{_fmt(x + 1.5)} {_fmt(m - y - 0.5)}")
            parts.append(f"M{_fmt(cx - 1)} {_fmt(cy)}")
            parts.append(f"L{_fmt(cx)} {_fmt(cy)}")
        elif not east and y == m - 1:
            bottom += 1
            parts.append(f"L{_fmt(x + 0.5)} {_fmt(m - y - 1.5)}")
            parts.append(f"M{_fmt(cx)} {_fmt(cy + 1)}")
            parts.append(f"L{_fmt(cx)} {_fmt(cy)}")
        else:
            parts.append(f"L{_fmt(cx)} {_fmt(cy)}")
        v, x, y = w, wx, wy
        if v == anchor:
            break
    return " ".join(parts), left, bottom


def render_svg(field: StepField, census: CycleCensus, out=None) -> str:
    """Render all cycles; returns the SVG text and optionally writes it."""
    dims = field.dims
    if dims.size > RENDER_GUARD_VERTICES:
        raise CapExceededError("rendering", dims.size, RENDER_GUARD_VERTICES)
    n, m = dims.n, dims.m
    scale = max(1, 900 // max(n, m))
    buf = io.StringIO()
    buf.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    buf.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{(n + 2) * scale}" height="{(m + 2) * scale}" '
        f'viewBox="-1 -1 {n + 2} {m + 2}">\n'
    )
    buf.write(f'<rect x="-1" y="-1" width="{n + 2}" height="{m + 2}" fill="white"/>\n')
    buf.write(
        f'<rect x="0" y="0" width="{n}" height="{m}" fill="none" '
        f'stroke="#cccccc" stroke-width="0.1"/>\n'
    )
    stroke_width = max(0.12, min(n, m) / 400)
    for i, cycle in enumerate(census.cycles):
        d, left, bottom = _cycle_path(field, cycle.anchor)
        color = PALETTE[i % len(PALETTE)]
        title = (
            f"cycle {i}: anchor {cycle.anchor}, class ({cycle.homology.p},{cycle.homology.q}), "
            f"length {cycle.length}, seam crossings {left}/{bottom}"
        )
        buf.write(
            f'<path d={quoteattr(d)} fill="none" stroke="{color}" '
            f'stroke-width="{stroke_width:g}" stroke-linecap="round">'
            f"<title>{title}</title></path>\n"
        )
    buf.write("</svg>\n")
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="\n") as fp:
            fp.write(text)
    return text

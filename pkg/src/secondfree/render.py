"""Deterministic SVG chord diagrams for annular permutations.

Debug aid, not publication graphics: two concentric circles, points
equally spaced (outer 1..m clockwise from the top, inner m+1..m+n),
straight segments inside a circle and quadratic curves across the
annulus, one path per cycle.
"""

from __future__ import annotations

import math

from .annular import is_annular_nc
from .perm import AnnulusShape, Permutation

_SIZE = 420
_CENTER = _SIZE / 2
_R_OUTER = 180.0
_R_INNER = 80.0
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _positions(shape: AnnulusShape) -> dict[int, tuple[float, float]]:
    pos = {}
    for idx, i in enumerate(shape.outer_points()):
        ang = -math.pi / 2 + 2 * math.pi * idx / shape.outer
        pos[i] = (_CENTER + _R_OUTER * math.cos(ang), _CENTER + _R_OUTER * math.sin(ang))
    for idx, i in enumerate(shape.inner_points()):
        ang = -math.pi / 2 + 2 * math.pi * idx / shape.inner
        pos[i] = (_CENTER + _R_INNER * math.cos(ang), _CENTER + _R_INNER * math.sin(ang))
    return pos


def render_annular(p: Permutation, shape: AnnulusShape) -> str:
    """An SVG document for an annular non-crossing permutation."""
    if not is_annular_nc(p, shape):
        raise ValueError(f"{p} is not annular non-crossing on {shape}")
    pos = _positions(shape)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<circle cx="{_fmt(_CENTER)}" cy="{_fmt(_CENTER)}" r="{_fmt(_R_OUTER)}" '
        'fill="none" stroke="#999" stroke-width="1"/>',
        f'<circle cx="{_fmt(_CENTER)}" cy="{_fmt(_CENTER)}" r="{_fmt(_R_INNER)}" '
        'fill="none" stroke="#999" stroke-width="1"/>',
    ]
    for ci, cyc in enumerate(p.cycles()):
        color = _PALETTE[ci % len(_PALETTE)]
        steps = []
        for t, a in enumerate(cyc):
            b = cyc[(t + 1) % len(cyc)]
            xa, ya = pos[a]
            xb, yb = pos[b]
            if len(cyc) == 1:
                continue
            if shape.circle_of(a) == shape.circle_of(b):
                steps.append(
                    f"M {_fmt(xa)} {_fmt(ya)} L {_fmt(xb)} {_fmt(yb)}"
                )
            else:
                # pull the control point toward the mid-annulus
                mx, my = (xa + xb) / 2, (ya + yb) / 2
                dx, dy = mx - _CENTER, my - _CENTER
                norm = math.hypot(dx, dy) or 1.0
                mid_r = (_R_OUTER + _R_INNER) / 2
                cx = _CENTER + dx / norm * mid_r
                cy = _CENTER + dy / norm * mid_r
                steps.append(
                    f"M {_fmt(xa)} {_fmt(ya)} Q {_fmt(cx)} {_fmt(cy)} {_fmt(xb)} {_fmt(yb)}"
                )
        d = " ".join(steps) if steps else f"M {_fmt(pos[cyc[0]][0])} {_fmt(pos[cyc[0]][1])}"
        parts.append(
            f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
    for i in range(1, shape.size + 1):
        x, y = pos[i]
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#000"/>')
        lx = x + (8 if x >= _CENTER else -14)
        ly = y + (12 if y >= _CENTER else -6)
        parts.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="11" '
            f'font-family="monospace">{i}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

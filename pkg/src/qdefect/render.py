"""SVG rendering of defect profiles: glyph lattices and eigenvalue charts.

Q-tensors are drawn as rod glyphs aligned with the leading eigenvector
(length proportional to the spectral gap, colour by biaxiality) or as
eigenvalue-shifted boxes; the shift keeps every box edge positive since a
traceless spectrum always contains a negative eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .params import ModelParams
from .reduced import Profile
from .tensor import QTensor, ansatz_components, ansatz_eigenvalues, biaxiality, eigen3

SVG_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)

# blue -> grey -> red ramp for the biaxiality measure in [0, 1]
_COLOR_STOPS = [
    (0.0, (38, 84, 166)),
    (0.5, (200, 200, 200)),
    (1.0, (178, 24, 43)),
]


def biaxiality_color(beta: float) -> str:
    beta = min(max(beta, 0.0), 1.0)
    for (x0, c0), (x1, c1) in zip(_COLOR_STOPS, _COLOR_STOPS[1:]):
        if beta <= x1:
            t = (beta - x0) / (x1 - x0)
            rgb = tuple(round(a + t * (b - a)) for a, b in zip(c0, c1))
            return "#%02x%02x%02x" % rgb
    return "#%02x%02x%02x" % _COLOR_STOPS[-1][1]


@dataclass
class RenderSpec:
    """Rendering options for the glyph lattice."""

    style: str = "rod"
    density: int = 16
    size: int = 640
    shift: float | None = None  # box style: eigenvalue shift; None = auto

    def __post_init__(self):
        if self.style not in ("rod", "box"):
            raise InvalidParams(f"glyph style must be 'rod' or 'box', got {self.style!r}")
        if self.density < 4:
            raise InvalidParams("glyph density must be at least 4")
        if self.size < 64:
            raise InvalidParams("image size must be at least 64 px")


def _lattice(params: ModelParams, density: int):
    """Polar glyph lattice: ``density`` rings plus the centre point."""
    points = [(0.0, 0.0)]
    for j in range(1, density + 1):
        r = params.R * j / density
        for a in range(4 * density):
            points.append((r, 2.0 * math.pi * a / (4 * density)))
    return points


def _profile_interp(profile: Profile, r: float):
    u = float(np.interp(r, profile.grid.nodes, profile.u))
    v = float(np.interp(r, profile.grid.nodes, profile.v))
    return u, v


def glyph_svg(profile: Profile, params: ModelParams, spec: RenderSpec) -> str:
    """Glyph-lattice rendering of the lifted two-mode field."""
    size = spec.size
    cx = cy = size / 2.0
    px_scale = 0.45 * size / params.R
    points = _lattice(params, spec.density)

    tensors = []
    for r, phi in points:
        u, v = _profile_interp(profile, r)
        tensors.append((r, phi, QTensor(ansatz_components(u, v, phi, params.k))))

    spectra = [eigen3(q) for _, _, q in tensors]
    gap_max = max(lam[2] - lam[1] for lam, _ in spectra) or 1.0
    lam_min = min(lam[0] for lam, _ in spectra)
    shift = spec.shift if spec.shift is not None else 1.1 * abs(lam_min)
    lam_span = max(lam[2] for lam, _ in spectra) + shift or 1.0
    cell = 0.9 * size / (2.0 * spec.density + 1)

    parts = [SVG_HEADER.format(w=size, h=size)]
    parts.append(
        f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{params.R * px_scale:.2f}" '
        'fill="none" stroke="#888888" stroke-width="1"/>\n'
    )
    for (r, phi, q), (lam, vecs) in zip(tensors, spectra):
        x = cx + r * math.cos(phi) * px_scale
        y = cy - r * math.sin(phi) * px_scale
        color = biaxiality_color(biaxiality(q))
        if spec.style == "rod":
            leading = vecs[:, 2]
            ip = math.hypot(leading[0], leading[1])
            length = cell * (lam[2] - lam[1]) / gap_max
            if ip < 1e-9 or length < 0.05 * cell:
                parts.append(
                    f'<circle class="glyph-dot" cx="{x:.3f}" cy="{y:.3f}" '
                    f'r="{0.12 * cell:.3f}" fill="{color}"/>\n'
                )
                continue
            dx = leading[0] / ip * length / 2.0
            dy = leading[1] / ip * length / 2.0
            parts.append(
                f'<line class="glyph" x1="{x - dx:.3f}" y1="{y + dy:.3f}" '
                f'x2="{x + dx:.3f}" y2="{y - dy:.3f}" '
                f'stroke="{color}" stroke-width="{0.16 * cell:.3f}" '
                'stroke-linecap="round"/>\n'
            )
        else:
            order = np.argsort(np.abs(vecs[2, :]))  # most in-plane axes first
            va = vecs[:, order[0]]
            wa = cell * (lam[order[0]] + shift) / lam_span
            wb = cell * (lam[order[1]] + shift) / lam_span
            ang = -math.degrees(math.atan2(va[1], va[0]))
            parts.append(
                f'<rect class="glyph-box" x="{-wa / 2:.3f}" y="{-wb / 2:.3f}" '
                f'width="{wa:.3f}" height="{wb:.3f}" fill="{color}" '
                f'fill-opacity="0.85" stroke="#333333" stroke-width="0.5" '
                f'transform="translate({x:.3f} {y:.3f}) rotate({ang:.3f})"/>\n'
            )
    parts.append("</svg>\n")
    return "".join(parts)


def eigenvalue_chart_svg(
    profile: Profile, params: ModelParams, size: int = 640, title: str = ""
) -> str:
    """Line chart of the three frame eigenvalues against the radius.

    The curves follow the smooth frame axes (out-of-plane, planar
    perpendicular, planar parallel), so genuine eigenvalue crossings show
    up as curve intersections instead of sorting kinks.
    """
    r = profile.grid.nodes
    lam = ansatz_eigenvalues(profile.u, profile.v)  # (N+1, 3)
    w, h = size, int(size * 0.75)
    ml, mr, mt, mb = 60, 20, 30, 45
    lam_min = float(np.min(lam))
    lam_max = float(np.max(lam))
    pad = 0.08 * (lam_max - lam_min or 1.0)
    lo, hi = lam_min - pad, lam_max + pad

    def sx(rv):
        return ml + (rv / r[-1]) * (w - ml - mr)

    def sy(val):
        return mt + (hi - val) / (hi - lo) * (h - mt - mb)

    colors = ("#2654a6", "#b2182b", "#1a7a3c")
    names = ("lambda1", "lambda2", "lambda3")
    parts = [SVG_HEADER.format(w=w, h=h)]
    if title:
        parts.append(
            f'<text x="{w / 2:.0f}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{title}</text>\n'
        )
    # axes
    y0 = sy(0.0) if lo < 0.0 < hi else sy(lo)
    parts.append(
        f'<line x1="{ml}" y1="{y0:.2f}" x2="{w - mr}" y2="{y0:.2f}" '
        'stroke="#444444" stroke-width="1"/>\n'
    )
    parts.append(
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{h - mb}" '
        'stroke="#444444" stroke-width="1"/>\n'
    )
    for frac in (0.0, 0.5, 1.0):
        rv = frac * r[-1]
        parts.append(
            f'<text x="{sx(rv):.1f}" y="{h - mb + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{rv:.2f}</text>\n'
        )
    for val in (lo, 0.0, hi) if lo < 0.0 < hi else (lo, hi):
        parts.append(
            f'<text x="{ml - 6}" y="{sy(val) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{val:.2f}</text>\n'
        )
    parts.append(
        f'<text x="{(ml + w - mr) / 2:.0f}" y="{h - 8}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">r</text>\n'
    )
    for idx in range(3):
        pts = " ".join(f"{sx(rv):.2f},{sy(val):.2f}" for rv, val in zip(r, lam[:, idx]))
        parts.append(
            f'<polyline class="eigencurve" id="{names[idx]}" points="{pts}" '
            f'fill="none" stroke="{colors[idx]}" stroke-width="1.6"/>\n'
        )
        parts.append(
            f'<text x="{w - mr - 4}" y="{mt + 14 * (idx + 1)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="{colors[idx]}">'
            f"{names[idx]}</text>\n"
        )
    parts.append("</svg>\n")
    return "".join(parts)

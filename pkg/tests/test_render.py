import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from qdefect import (
    Branch,
    InvalidParams,
    ModelParams,
    RadialGrid,
    RenderSpec,
    eigenvalue_chart_svg,
    explicit_profile,
    glyph_svg,
)

SVG_NS = "{http://www.w3.org/2000/svg}"


def limit_params(k=1):
    return ModelParams(a2=1.0, b2=0.0, c2=1.0, L=0.0, R=1.0, k=k)


@pytest.fixture(scope="module")
def minus_profile():
    p = limit_params()
    grid = RadialGrid.uniform(p.R, 128)
    return p, explicit_profile(Branch.MINUS, p, grid)


def test_render_spec_validation():
    RenderSpec(style="rod", density=4)
    with pytest.raises(InvalidParams):
        RenderSpec(style="blob")
    with pytest.raises(InvalidParams):
        RenderSpec(density=3)
    with pytest.raises(InvalidParams):
        RenderSpec(size=10)


def test_glyph_svg_is_valid_svg11(minus_profile):
    p, prof = minus_profile
    text = glyph_svg(prof, p, RenderSpec(density=8))
    assert text.startswith('<?xml version="1.0"')
    assert 'version="1.1"' in text
    root = ET.fromstring(text)
    assert root.tag == f"{SVG_NS}svg"


def test_boundary_glyphs_align_with_director(minus_profile):
    # rods on the rim ring must align with n(phi) = (cos(k phi/2), sin(k phi/2))
    p, prof = minus_profile
    size = 640
    spec = RenderSpec(density=8, size=size)
    root = ET.fromstring(glyph_svg(prof, p, spec))
    cx = cy = size / 2.0
    px_scale = 0.45 * size / p.R
    checked = 0
    for line in root.iter(f"{SVG_NS}line"):
        if line.get("class") != "glyph":
            continue
        x1, y1 = float(line.get("x1")), float(line.get("y1"))
        x2, y2 = float(line.get("x2")), float(line.get("y2"))
        mx, my = (x1 + x2) / 2.0 - cx, cy - (y1 + y2) / 2.0
        r = math.hypot(mx, my) / px_scale
        if abs(r - p.R) > 1e-6:
            continue
        phi = math.atan2(my, mx) % (2.0 * math.pi)
        angle = math.atan2(-(y2 - y1), x2 - x1)  # svg y axis points down
        expected = 0.5 * p.k * phi
        diff = (angle - expected) % math.pi
        # svg coordinates carry three decimals; angle recovery is ~3e-5 rad
        assert min(diff, math.pi - diff) < 1e-4
        checked += 1
    assert checked >= 16


def test_core_glyph_is_isotropic_dot(minus_profile):
    # u(0) = 0 leaves the in-plane spectrum degenerate at the core
    p, prof = minus_profile
    size = 640
    root = ET.fromstring(glyph_svg(prof, p, RenderSpec(density=8, size=size)))
    dots = [
        el
        for el in root.iter(f"{SVG_NS}circle")
        if el.get("class") == "glyph-dot"
        and abs(float(el.get("cx")) - size / 2) < 1e-9
        and abs(float(el.get("cy")) - size / 2) < 1e-9
    ]
    assert len(dots) == 1


def test_box_style_edges_positive(minus_profile):
    p, prof = minus_profile
    root = ET.fromstring(glyph_svg(prof, p, RenderSpec(style="box", density=6)))
    boxes = [el for el in root.iter(f"{SVG_NS}rect") if el.get("class") == "glyph-box"]
    assert len(boxes) > 20
    for box in boxes:
        assert float(box.get("width")) > 0.0
        assert float(box.get("height")) > 0.0


def test_eigenvalue_chart_has_three_curves(minus_profile):
    p, prof = minus_profile
    root = ET.fromstring(eigenvalue_chart_svg(prof, p))
    curves = [el for el in root.iter(f"{SVG_NS}polyline") if el.get("class") == "eigencurve"]
    assert len(curves) == 3


def test_plus_branch_chart_shows_interior_crossing():
    # the out-of-plane eigenvalue of the plus branch crosses the planar one
    # at the interior uniaxial point r = R 3^(-1/|k|)
    p = limit_params(k=1)
    grid = RadialGrid.uniform(p.R, 256)
    prof = explicit_profile(Branch.PLUS, p, grid)
    root = ET.fromstring(eigenvalue_chart_svg(prof, p, size=640))
    pts = {}
    for el in root.iter(f"{SVG_NS}polyline"):
        if el.get("class") == "eigencurve":
            coords = np.array(
                [[float(v) for v in pair.split(",")] for pair in el.get("points").split()]
            )
            pts[el.get("id")] = coords
    lam_z = pts["lambda1"]
    lam_n = pts["lambda3"]
    assert np.array_equal(lam_z[:, 0], lam_n[:, 0])
    diff = lam_z[:, 1] - lam_n[:, 1]
    signs = np.sign(diff[np.abs(diff) > 1e-12])
    crossings = np.nonzero(np.diff(signs))[0]
    assert crossings.size == 1
    x_cross = lam_z[crossings[0], 0]
    # screen x of the analytic uniaxial radius R/3
    xs = lam_z[:, 0]
    r_cross = (x_cross - xs[0]) / (xs[-1] - xs[0]) * p.R
    assert r_cross == pytest.approx(p.R / 3.0, abs=0.02 * p.R)


def test_minus_branch_chart_has_no_interior_crossing():
    p = limit_params(k=1)
    grid = RadialGrid.uniform(p.R, 256)
    prof = explicit_profile(Branch.MINUS, p, grid)
    root = ET.fromstring(eigenvalue_chart_svg(prof, p))
    pts = {}
    for el in root.iter(f"{SVG_NS}polyline"):
        if el.get("class") == "eigencurve":
            coords = np.array(
                [[float(v) for v in pair.split(",")] for pair in el.get("points").split()]
            )
            pts[el.get("id")] = coords
    diff = pts["lambda1"][1:-1, 1] - pts["lambda3"][1:-1, 1]
    assert np.all(diff > 0.0) or np.all(diff < 0.0)

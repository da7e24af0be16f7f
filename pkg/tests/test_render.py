"""
Tests for PPM and SVG reception maps.
"""
import numpy as np
import pytest

from sinrmap.config import settings
from sinrmap.pointloc import Scheme, qds_build
from sinrmap.render import (
    TAG_COLOURS,
    WHITE,
    classify,
    pixel_centres,
    render_map,
    station_colour,
)
from sinrmap.schemas import RenderSpec


def decode_ppm(data: bytes) -> np.ndarray:
    header, width_height, maxval, body = data.split(b"\n", 3)
    assert header == b"P6" and maxval == b"255"
    width, height = (int(v) for v in width_height.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)


def test_pixel_centres_row_zero_is_top():
    spec = RenderSpec(bounds=(0.0, 0.0, 4.0, 2.0), width=4, height=2)
    xs, ys, points = pixel_centres(spec)
    assert xs.tolist() == [0.5, 1.5, 2.5, 3.5]
    assert ys.tolist() == [1.5, 0.5]
    assert points.shape == (8, 2)
    assert points[0].tolist() == [0.5, 1.5]


def test_render_spec_validation():
    with pytest.raises(ValueError):
        RenderSpec(bounds=(0.0, 0.0, 0.0, 1.0), width=4, height=4)
    with pytest.raises(ValueError):
        RenderSpec(bounds=(0.0, 0.0, 1.0, 1.0), width=0, height=4)
    with pytest.raises(ValueError):
        RenderSpec(bounds=(0.0, 0.0, 1.0, 1.0), width=4, height=4, mode="rainbow")


def test_zone_map_ppm(noisy_pair_network):
    spec = RenderSpec(bounds=(-1.0, -1.0, 5.0, 1.0), width=6, height=2)
    image = decode_ppm(render_map(noisy_pair_network, spec))
    assert image.shape == (2, 6, 3)
    # pixel centres at x = -0.5 .. 4.5, y = +-0.5
    assert tuple(image[0, 1]) == station_colour(0)
    assert tuple(image[1, 4]) == station_colour(1)
    assert tuple(image[0, 2]) == WHITE


def test_heatmap_is_deterministic(triangle_network):
    spec = RenderSpec(bounds=(-2.0, -2.0, 4.0, 4.0), width=16, height=16, mode="sinr_heatmap")
    assert render_map(triangle_network, spec) == render_map(triangle_network, spec)


def test_qds_tag_map(noisy_pair_network):
    qds = qds_build(noisy_pair_network, 0, Scheme.C, 0.25)
    spec = RenderSpec(bounds=(-2.0, -2.0, 2.0, 2.0), width=8, height=8, mode="qds_tags")
    field = classify(noisy_pair_network, spec, qds)
    assert set(np.unique(field).tolist()) <= {0, 1, 2}
    image = decode_ppm(render_map(noisy_pair_network, spec, qds))
    assert tuple(image[0, 0]) == TAG_COLOURS[0]
    with pytest.raises(ValueError, match="needs a QDS"):
        classify(noisy_pair_network, spec)


def test_small_svg_uses_pixels(pair_network):
    spec = RenderSpec(bounds=(-1.0, -1.0, 5.0, 1.0), width=12, height=4, fmt="svg")
    svg = render_map(pair_network, spec).decode("utf-8")
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert "<rect" in svg
    assert "approximate" not in svg


def test_large_svg_uses_contours(pair_network, monkeypatch):
    monkeypatch.setattr(settings, "svg_pixel_limit", 16)
    spec = RenderSpec(bounds=(-1.0, -1.0, 5.0, 1.0), width=24, height=8, fmt="svg")
    svg = render_map(pair_network, spec).decode("utf-8")
    assert "approximate" in svg
    assert "<polyline" in svg


def test_maps_are_planar(line_network):
    spec = RenderSpec(bounds=(0.0, 0.0, 1.0, 1.0), width=2, height=2)
    with pytest.raises(ValueError, match="planar"):
        render_map(line_network, spec)

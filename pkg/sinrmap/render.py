"""
Reception maps as PPM (P6) or SVG images.

Pixels are classified at their centres. Small SVGs are drawn as run-length
pixel rectangles; above settings.svg_pixel_limit pixels the SVG carries
contour lines instead, which are approximate.
"""
import logging
from typing import Optional

import numpy as np
from matplotlib import colormaps
from matplotlib.figure import Figure

from sinrmap.config import settings
from sinrmap.pointloc import QDS, CellTag, qds_query_many
from sinrmap.schemas import Network, RenderSpec
from sinrmap.sinr_core import heard_field, sinr_matrix

logger = logging.getLogger(__name__)

WHITE = (255, 255, 255)
TAG_COLOURS = {
    CellTag.MINUS: (224, 224, 224),
    CellTag.PLUS: (44, 160, 44),
    CellTag.QUESTION: (255, 127, 14),
}


def station_colour(k: int) -> tuple[int, int, int]:
    r, g, b = colormaps["tab10"].colors[k % 10]
    return round(r * 255), round(g * 255), round(b * 255)


def pixel_centres(spec: RenderSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pixel centre coordinates; row 0 is the top of the image (largest y)."""
    x0, y0, x1, y1 = spec.bounds
    xs = x0 + (np.arange(spec.width) + 0.5) * (x1 - x0) / spec.width
    ys = y1 - (np.arange(spec.height) + 0.5) * (y1 - y0) / spec.height
    gx, gy = np.meshgrid(xs, ys)
    return xs, ys, np.stack([gx.ravel(), gy.ravel()], axis=1)


def classify(net: Network, spec: RenderSpec, qds: Optional[QDS] = None) -> np.ndarray:
    """
    Per-pixel class field (height, width):
    zones -> heard station or -1, qds_tags -> tag code, sinr_heatmap -> max SINR.
    Raises ValueError for non-planar networks or qds_tags without a QDS.
    """
    if net.dim != 2:
        raise ValueError(f"maps are planar, got dim={net.dim}")
    _, _, points = pixel_centres(spec)
    shape = (spec.height, spec.width)
    if spec.mode == "zones":
        return heard_field(net, points).reshape(shape)
    if spec.mode == "qds_tags":
        if qds is None:
            raise ValueError("qds_tags mode needs a QDS")
        return qds_query_many(qds, points).reshape(shape).astype(np.int64)
    return np.max(sinr_matrix(net, points), axis=0).reshape(shape)


def colourise(field: np.ndarray, mode: str, beta: float) -> np.ndarray:
    """(height, width, 3) uint8 image of a class field."""
    rgb = np.empty(field.shape + (3,), dtype=np.uint8)
    if mode == "zones":
        rgb[:] = WHITE
        for k in np.unique(field[field >= 0]).tolist():
            rgb[field == k] = station_colour(k)
    elif mode == "qds_tags":
        for tag, colour in TAG_COLOURS.items():
            rgb[field == tag] = colour
    else:
        # log scale centred on the threshold, clipped at four decades either way
        with np.errstate(divide="ignore"):
            scaled = np.log10(np.maximum(field, 1e-300) / beta)
        unit = (np.clip(scaled, -4.0, 4.0) + 4.0) / 8.0
        rgba = colormaps["viridis"](unit)
        rgb[:] = np.round(rgba[..., :3] * 255).astype(np.uint8)
    return rgb


def to_ppm(rgb: np.ndarray) -> bytes:
    height, width, _ = rgb.shape
    return f"P6\n{width} {height}\n255\n".encode("ascii") + rgb.tobytes()


def _hex(colour) -> str:
    return "#%02x%02x%02x" % tuple(int(c) for c in colour)


def _svg_pixels(rgb: np.ndarray) -> list[str]:
    height, width, _ = rgb.shape
    out = []
    for row in range(height):
        line = rgb[row]
        change = np.flatnonzero(np.any(line[1:] != line[:-1], axis=1)) + 1
        starts = np.concatenate([[0], change])
        ends = np.concatenate([change, [width]])
        for a, b in zip(starts.tolist(), ends.tolist()):
            out.append(
                f'<rect x="{a}" y="{row}" width="{b - a}" height="1" fill="{_hex(line[a])}"/>'
            )
    return out


def _svg_contours(field: np.ndarray, levels: list[tuple[np.ndarray, float, str]]) -> list[str]:
    """Polylines (in pixel units) of each indicator field at 0.5."""
    height, width = field.shape
    cols = np.arange(width) + 0.5
    rows = np.arange(height) + 0.5
    fig = Figure()
    ax = fig.add_subplot()
    out = []
    for indicator, level, colour in levels:
        if indicator.min() == indicator.max():
            continue
        cs = ax.contour(cols, rows, indicator, levels=[level])
        for seg in cs.allsegs[0]:
            if len(seg) < 2:
                continue
            points = " ".join(f"{x:.3f},{y:.3f}" for x, y in seg)
            out.append(f'<polyline points="{points}" fill="none" stroke="{colour}" stroke-width="1"/>')
    return out


def to_svg(field: np.ndarray, rgb: np.ndarray, spec: RenderSpec, beta: float) -> bytes:
    height, width = field.shape
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" shape-rendering="crispEdges">'
    ]
    if width * height <= settings.svg_pixel_limit:
        body = _svg_pixels(rgb)
    else:
        logger.info("%dx%d pixels above svg_pixel_limit, drawing contours", width, height)
        head.append("<!-- approximate: contour lines traced on the pixel grid -->")
        head.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
        if spec.mode == "zones":
            levels = [
                ((field == k).astype(float), 0.5, _hex(station_colour(k)))
                for k in np.unique(field[field >= 0]).tolist()
            ]
        elif spec.mode == "qds_tags":
            levels = [
                ((field == tag).astype(float), 0.5, _hex(colour))
                for tag, colour in TAG_COLOURS.items()
            ]
        else:
            levels = [(np.minimum(field, 1e12), beta, "#000000")]
        body = _svg_contours(field, levels)
    return "\n".join(head + body + ["</svg>", ""]).encode("utf-8")


def render_map(net: Network, spec: RenderSpec, qds: Optional[QDS] = None) -> bytes:
    """Image bytes for the requested mode and format."""
    field = classify(net, spec, qds)
    rgb = colourise(field, spec.mode, net.beta)
    if spec.fmt == "ppm":
        return to_ppm(rgb)
    return to_svg(field, rgb, spec, net.beta)

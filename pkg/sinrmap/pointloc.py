"""
Grid based approximate point location.

A QDS covers the square around station i that contains B(s_i, delta_hat)
with cells of side gamma, s_i being a grid vertex. Each cell carries a tag:
plus (inside Z_i), minus (outside) or question (near the boundary).
Tags come from exact Sturm tests on the cell edges; cheaper floating-point
certificates are tried first and only used when they force the same answer.
"""
import logging
import math
import struct
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from sinrmap.algebra import (
    RationalUniPoly,
    eval_poly,
    restrict_characteristic,
    restrict_noise,
    sturm_count,
    to_fraction,
)
from sinrmap.config import settings
from sinrmap.model import even_alpha, is_collinear, min_station_distance, positions
from sinrmap.schemas import FatnessBounds, LocateResult, Network
from sinrmap.sinr_core import sinr_envelope, sinr_field, weighted_voronoi_owner

logger = logging.getLogger(__name__)


class CellTag(IntEnum):
    """Cell tags; the values are the 2-bit codes of the QDS file format."""

    MINUS = 0
    PLUS = 1
    QUESTION = 2

    @property
    def symbol(self) -> str:
        return {0: "-", 1: "+", 2: "?"}[self.value]


class Scheme(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    COLINEAR = "colinear"

    @property
    def code(self) -> int:
        return {"A": 0, "B": 1, "C": 2, "colinear": 3}[self.value]

    @classmethod
    def from_code(cls, code: int) -> "Scheme":
        for scheme in cls:
            if scheme.code == code:
                return scheme
        raise ValueError(f"unknown scheme code {code}")


SCHEME_GUARANTEES = {
    Scheme.A: "two-way: plus/minus, misclassified area bounded by epsilon times the zone area",
    Scheme.B: "two-way plus three-way fallback: misclassified points lie within epsilon of the boundary",
    Scheme.C: "sound three-way: plus is heard, minus is not heard, question is near the threshold",
    Scheme.COLINEAR: "sound three-way for collinear stations",
}


def scheme_guarantee(scheme: Scheme | str) -> str:
    """Plain-language guarantee of a tagging scheme, used in reports."""
    return SCHEME_GUARANTEES[Scheme(scheme)]


# ============================================================================
# Fatness bounds
# ============================================================================


def fatness_bounds(net: Network, i: int) -> FatnessBounds:
    """
    Radius bounds for Z_i around s_i with powers normalised by power_i:
    rho_hat   = delta / ((beta (P(n-1) + N' delta^alpha))^(1/alpha) + 1)
    delta_hat = (power_i / (beta N))^(1/alpha), infinite when N = 0
    where P is the largest relative interferer power and N' = N / power_i.
    """
    if not 0 <= i < net.n:
        raise ValueError(f"station index {i} out of range for {net.n} stations")
    delta = min_station_distance(net, i)
    own = net.stations[i].power
    pbar = max(s.power for j, s in enumerate(net.stations) if j != i) / own
    noise = net.noise / own
    a = net.alpha

    rho_hat = delta / ((net.beta * (pbar * (net.n - 1) + noise * delta**a)) ** (1.0 / a) + 1.0)
    lemma_rho_hat = delta / math.sqrt(pbar * net.n)
    unbounded = net.noise == 0
    delta_hat = math.inf if unbounded else (own / (net.beta * net.noise)) ** (1.0 / a)
    return FatnessBounds(
        station=i,
        delta=delta,
        rho_hat=rho_hat,
        lemma_rho_hat=lemma_rho_hat,
        delta_hat=delta_hat,
        phi_hat=delta_hat / rho_hat,
        perimeter_bound=3 * math.pi * delta_hat * net.n**2,
        unbounded=unbounded,
    )


# ============================================================================
# Segment and cell tests
# ============================================================================


@dataclass(frozen=True)
class GridCell:
    """Axis-aligned square [x0, x0+size] x [y0, y0+size] with exact corners."""

    x0: Fraction
    y0: Fraction
    size: Fraction

    @classmethod
    def around(cls, x0: float, y0: float, size: float) -> "GridCell":
        return cls(to_fraction(x0), to_fraction(y0), to_fraction(size))

    def edges(self) -> list[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
        """Bottom, top, left, right; every edge runs in increasing coordinate."""
        x0, y0, s = self.x0, self.y0, self.size
        return [
            ((x0, y0), (x0 + s, y0)),
            ((x0, y0 + s), (x0 + s, y0 + s)),
            ((x0, y0), (x0, y0 + s)),
            ((x0 + s, y0), (x0 + s, y0 + s)),
        ]

    @property
    def center(self) -> tuple[float, float]:
        half = self.size / 2
        return float(self.x0 + half), float(self.y0 + half)


def seg_test(f: RationalUniPoly) -> CellTag:
    """
    Tags the segment t in [0, 1] from its characteristic polynomial:
    no root on the closed segment gives minus when F > 0 at both ends and plus
    otherwise; any root gives question. The zero polynomial gives question.
    """
    if f.is_zero:
        return CellTag.QUESTION
    f0, f1 = eval_poly(f, 0), eval_poly(f, 1)
    roots = sturm_count(f, 0, 1) + (1 if f0 == 0 else 0)
    if roots > 0:
        return CellTag.QUESTION
    if f0 > 0 and f1 > 0:
        return CellTag.MINUS
    return CellTag.PLUS


def edge_tag(
    net: Network,
    i: int,
    p1: Sequence[Fraction | float],
    p2: Sequence[Fraction | float],
    threshold: Fraction | float | None = None,
) -> CellTag:
    """Exact seg_test of the segment p1 -> p2 at the given reception threshold."""
    return seg_test(restrict_characteristic(net, i, p1, p2, beta_override=threshold))


def seg_test_silent(
    net: Network, p1: Sequence[Fraction | float], p2: Sequence[Fraction | float]
) -> CellTag:
    """
    seg_test on the noise polynomial: plus when no station is heard anywhere on
    the segment, minus when some station is heard all along it.
    Raises ValueError for beta < 1, where the product form does not describe silence.
    """
    if net.overlapping_zones:
        raise ValueError(f"silent-zone tests assume beta >= 1, got {net.beta}")
    return seg_test(restrict_noise(net, p1, p2))


def combine_sturm_cell(edge_tags: Sequence[CellTag]) -> CellTag:
    """Minus if any edge is minus, plus otherwise."""
    return CellTag.MINUS if CellTag.MINUS in edge_tags else CellTag.PLUS


def combine_sturm_cell_b(edge_tags: Sequence[CellTag]) -> CellTag:
    """Minus if any edge is minus, else plus if any edge is plus, else question."""
    if CellTag.MINUS in edge_tags:
        return CellTag.MINUS
    if CellTag.PLUS in edge_tags:
        return CellTag.PLUS
    return CellTag.QUESTION


def sturm_cell(
    net: Network, i: int, cell: GridCell, threshold: Fraction | float | None = None
) -> CellTag:
    return combine_sturm_cell([edge_tag(net, i, a, b, threshold) for a, b in cell.edges()])


def sturm_cell_b(
    net: Network, i: int, cell: GridCell, threshold: Fraction | float | None = None
) -> CellTag:
    return combine_sturm_cell_b([edge_tag(net, i, a, b, threshold) for a, b in cell.edges()])


def snap_epsilon(epsilon: float, bits: int | None = None) -> Fraction:
    """
    Rounds epsilon to a multiple of 2^-bits so (1 +- epsilon)^alpha beta stays exact.
    Raises ValueError unless 0 < epsilon < 1.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    bits = settings.epsilon_bits if bits is None else bits
    scale = 2**bits
    snapped = Fraction(max(1, min(scale - 1, round(epsilon * scale))), scale)
    return snapped


def tag_thresholds(net: Network, epsilon: Fraction) -> tuple[Fraction, Fraction]:
    """((1 - eps)^alpha beta, (1 + eps)^alpha beta) as exact rationals."""
    alpha = even_alpha(net)
    beta = to_fraction(net.beta)
    return (1 - epsilon) ** alpha * beta, (1 + epsilon) ** alpha * beta


def tag_cell(net: Network, i: int, cell: GridCell, epsilon: float | Fraction) -> CellTag:
    """
    Plus if SturmCell at the raised threshold is not minus; otherwise minus if
    SturmCell at the lowered threshold is minus; otherwise question.
    """
    eps = epsilon if isinstance(epsilon, Fraction) else snap_epsilon(epsilon)
    low, high = tag_thresholds(net, eps)
    if sturm_cell(net, i, cell, high) != CellTag.MINUS:
        return CellTag.PLUS
    if sturm_cell(net, i, cell, low) == CellTag.MINUS:
        return CellTag.MINUS
    return CellTag.QUESTION


# ============================================================================
# QDS
# ============================================================================


@dataclass
class QDS:
    """Tags of a w x h grid, row-major with rows along y: tags[iy, ix]."""

    station: int
    scheme: Scheme
    epsilon: float
    gamma: float
    origin: tuple[float, float]
    extent: tuple[int, int]
    tags: np.ndarray = field(repr=False)

    def counts(self) -> dict[str, int]:
        values = np.bincount(self.tags.ravel(), minlength=3)
        return {"minus": int(values[0]), "plus": int(values[1]), "question": int(values[2])}

    def cell(self, ix: int, iy: int) -> GridCell:
        return GridCell(
            to_fraction(self.origin[0]) + ix * to_fraction(self.gamma),
            to_fraction(self.origin[1]) + iy * to_fraction(self.gamma),
            to_fraction(self.gamma),
        )


def snap_dyadic(x: float, bits: int = 4) -> Fraction:
    """Largest m * 2^e <= x with an m of at most `bits` bits."""
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"grid spacing must be positive and finite, got {x}")
    mantissa, exponent = math.frexp(x)
    return Fraction(math.floor(mantissa * 2**bits)) * Fraction(2) ** (exponent - bits)


def grid_spacing(
    scheme: Scheme, epsilon: float, bounds: FatnessBounds, n: int, phi: float
) -> Fraction:
    """
    gamma per scheme, capped at rho_hat / (2 sqrt 2) so the four cells around
    s_i sit inside B(s_i, rho_hat), then snapped to a dyadic value.
    """
    rho = bounds.rho_hat
    match scheme:
        case Scheme.COLINEAR:
            raw = epsilon * rho / (8 * n * phi)
        case Scheme.A:
            c = settings.scheme_a_c1 + settings.scheme_a_c2
            raw = epsilon * rho / (8 * c * n**4 * phi)
        case Scheme.B:
            raw = epsilon / math.sqrt(2)
        case Scheme.C:
            raw = epsilon * rho / (3 * math.sqrt(2))
    return snap_dyadic(min(raw, rho / (2 * math.sqrt(2))))


class _EdgeGrid:
    """
    Edge bookkeeping for a w x h grid. Horizontal edge (ix, iy) has id
    iy * w + ix; vertical edge (ix, iy) has id nh + iy * (w + 1) + ix.
    """

    def __init__(self, origin: tuple[Fraction, Fraction], gamma: Fraction, w: int, h: int):
        self.origin = origin
        self.gamma = gamma
        self.w, self.h = w, h
        self.nh = w * (h + 1)
        self.origin_f = np.array([float(origin[0]), float(origin[1])])
        self.gamma_f = float(gamma)

    def cell_edges(self, ix: np.ndarray, iy: np.ndarray) -> np.ndarray:
        w, nh = self.w, self.nh
        return np.stack(
            [
                iy * w + ix,
                (iy + 1) * w + ix,
                nh + iy * (w + 1) + ix,
                nh + iy * (w + 1) + ix + 1,
            ],
            axis=1,
        )

    def lattice(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Integer start and end vertices of each edge."""
        horizontal = ids < self.nh
        vid = ids - self.nh
        sy = np.where(horizontal, ids // self.w, vid // (self.w + 1))
        sx = np.where(horizontal, ids % self.w, vid % (self.w + 1))
        ex = sx + horizontal
        ey = sy + ~horizontal
        return sx, sy, ex, ey

    def float_segments(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sx, sy, ex, ey = self.lattice(ids)
        starts = self.origin_f + self.gamma_f * np.stack([sx, sy], axis=1)
        ends = self.origin_f + self.gamma_f * np.stack([ex, ey], axis=1)
        return starts, ends

    def exact_segment(self, edge_id: int):
        sx, sy, ex, ey = (int(v[0]) for v in self.lattice(np.array([edge_id])))
        ox, oy = self.origin
        g = self.gamma
        return (ox + sx * g, oy + sy * g), (ox + ex * g, oy + ey * g)


def certify_edges(
    net: Network,
    i: int,
    threshold: float,
    starts: np.ndarray,
    ends: np.ndarray,
    depth: int | None = None,
    margin: float | None = None,
) -> np.ndarray:
    """
    Floating-point edge tags that agree with the exact test whenever given;
    -1 marks edges left undecided. Each edge is split into 2^level pieces;
    a piece whose SINR envelope stays strictly on one side of the threshold
    is certified, and SINR values on both sides of it prove a crossing.
    """
    depth = settings.edge_certificate_depth if depth is None else depth
    margin = settings.certificate_margin if margin is None else margin
    hi_thr = threshold * (1 + margin)
    lo_thr = threshold * (1 - margin)
    m = starts.shape[0]
    tags = np.full(m, -1, dtype=np.int8)
    if m == 0:
        return tags

    s0 = sinr_field(net, i, starts)
    s1 = sinr_field(net, i, ends)
    above = (s0 >= hi_thr) | (s1 >= hi_thr)
    below = (s0 <= lo_thr) | (s1 <= lo_thr)
    tags[above & below] = CellTag.QUESTION

    scale = 1.0 + float(np.abs(starts).max())
    for level in range(depth + 1):
        todo = np.flatnonzero(tags < 0)
        if todo.size == 0:
            break
        k = 2**level
        frac = (np.arange(k) + 0.5) / k
        a, b = starts[todo], ends[todo]
        pts = a[:, None, :] + frac[None, :, None] * (b - a)[:, None, :]
        length = np.linalg.norm(b - a, axis=1)
        radius = np.repeat(length / (2 * k) * (1 + 1e-9) + 1e-12 * scale, k)
        flat = pts.reshape(-1, net.dim)
        values = sinr_field(net, i, flat)
        lower, upper = sinr_envelope(net, i, flat, radius, sinr_values=values)
        values = values.reshape(-1, k)
        lower = lower.reshape(-1, k)
        upper = upper.reshape(-1, k)

        above[todo] |= (values >= hi_thr).any(axis=1)
        below[todo] |= (values <= lo_thr).any(axis=1)
        crossing = above[todo] & below[todo]
        outside = (upper < lo_thr).all(axis=1)
        inside = (lower > hi_thr).all(axis=1)
        tags[todo[crossing]] = CellTag.QUESTION
        tags[todo[~crossing & outside]] = CellTag.MINUS
        tags[todo[~crossing & inside]] = CellTag.PLUS
    return tags


def _grid_cells(
    net: Network,
    i: int,
    grid: _EdgeGrid,
    ix: np.ndarray,
    iy: np.ndarray,
    threshold: Fraction,
    three_way: bool,
    cache: dict,
) -> np.ndarray:
    """SturmCell (two-way) or SturmCellB (three-way) for many cells at one threshold."""
    if ix.size == 0:
        return np.zeros(0, dtype=np.uint8)
    ids = grid.cell_edges(ix, iy)
    unique, inverse = np.unique(ids.ravel(), return_inverse=True)
    starts, ends = grid.float_segments(unique)
    etags = certify_edges(net, i, float(threshold), starts, ends)
    per_cell = etags[inverse].reshape(-1, 4)

    has_minus = (per_cell == CellTag.MINUS).any(axis=1)
    pending = ~has_minus & (per_cell < 0).any(axis=1)
    exact_ids = np.unique(ids[pending][per_cell[pending] < 0])
    position = np.searchsorted(unique, exact_ids)
    for edge_id, pos in zip(exact_ids.tolist(), position.tolist()):
        key = (edge_id, threshold)
        if key not in cache:
            p1, p2 = grid.exact_segment(edge_id)
            cache[key] = edge_tag(net, i, p1, p2, threshold)
        etags[pos] = cache[key]
    if exact_ids.size:
        logger.debug("%d exact edge test(s) at threshold %s", exact_ids.size, float(threshold))
    per_cell = etags[inverse].reshape(-1, 4)

    out = np.full(ix.size, CellTag.PLUS, dtype=np.uint8)
    if three_way:
        out[~(per_cell == CellTag.PLUS).any(axis=1)] = CellTag.QUESTION
    out[(per_cell == CellTag.MINUS).any(axis=1)] = CellTag.MINUS
    return out


def _distance_to_cells(point: np.ndarray, centres: np.ndarray, half: float) -> np.ndarray:
    gap = np.maximum(np.abs(centres - point) - half, 0.0)
    return np.linalg.norm(gap, axis=-1)


def qds_build(
    net: Network,
    i: int,
    scheme: Scheme | str,
    epsilon: float,
    extent: Optional[float] = None,
) -> QDS:
    """
    Builds the point-location grid of station i.

    `extent` is the radius of the covered ball around s_i; it defaults to
    delta_hat and is required when N = 0.
    The grid is tagged from the stored binary64 origin s_i - k gamma. s_i is an
    exact grid vertex whenever that difference is representable, for instance
    when its coordinates are multiples of gamma's lowest bit; otherwise it sits
    within half an ulp of the origin from the nearest vertex.
    Raises ValueError for non-planar networks, odd alpha, epsilon outside (0, 1),
    the colinear scheme on non-collinear stations, or a grid above qds_max_cells.
    """
    scheme = Scheme(scheme)
    if net.dim != 2:
        raise ValueError(f"point location grids are planar, got dim={net.dim}")
    even_alpha(net)
    if not 0 <= i < net.n:
        raise ValueError(f"station index {i} out of range for {net.n} stations")
    eps = snap_epsilon(epsilon)
    if scheme is Scheme.COLINEAR and not is_collinear(net):
        raise ValueError("colinear scheme requires collinear stations")

    bounds = fatness_bounds(net, i)
    if extent is not None:
        if not extent > 0:
            raise ValueError(f"extent must be positive, got {extent}")
        radius = float(extent)
    elif bounds.unbounded:
        raise ValueError("extent required when noise is zero")
    else:
        radius = bounds.delta_hat
    phi = radius / bounds.rho_hat if bounds.unbounded else bounds.phi_hat

    gamma = grid_spacing(scheme, float(eps), bounds, net.n, phi)
    k = max(1, math.ceil(radius / gamma))
    w = h = 2 * k
    if w * h > settings.qds_max_cells:
        raise ValueError(
            f"grid of {w}x{h} cells exceeds qds_max_cells={settings.qds_max_cells}; "
            f"raise epsilon or give a smaller extent"
        )
    station = net.stations[i].pos
    exact_origin = [to_fraction(c) - k * gamma for c in station]
    origin_f = tuple(float(v) for v in exact_origin)
    origin = (to_fraction(origin_f[0]), to_fraction(origin_f[1]))
    drift = max(abs(o - e) for o, e in zip(origin, exact_origin))
    if drift:
        logger.debug("origin rounded by %.3g; s_i sits that far off a grid vertex", float(drift))
    grid = _EdgeGrid(origin, gamma, w, h)
    g = float(gamma)

    iy, ix = np.mgrid[0:h, 0:w]
    centres = np.stack([ix, iy], axis=-1) * g + np.array(origin_f) + g / 2
    diag = math.sqrt(2) * g
    tags = np.full((h, w), 255, dtype=np.uint8)

    if not bounds.unbounded:
        far = _distance_to_cells(np.array(station), centres, g / 2) > bounds.delta_hat
        tags[far] = CellTag.MINUS
    if not net.overlapping_zones:
        for j in range(net.n):
            if j == i:
                continue
            rho_j = fatness_bounds(net, j).rho_hat
            near_j = _distance_to_cells(positions(net)[j], centres, g / 2) < rho_j - diag
            tags[near_j] = CellTag.MINUS
    near_i = _distance_to_cells(np.array(station), centres, g / 2) < bounds.rho_hat - diag
    tags[near_i] = CellTag.PLUS

    active_iy, active_ix = np.nonzero(tags == 255)
    cache: dict = {}
    beta = to_fraction(net.beta)
    if scheme is Scheme.A:
        result = _grid_cells(net, i, grid, active_ix, active_iy, beta, False, cache)
    elif scheme in (Scheme.B, Scheme.COLINEAR):
        result = _grid_cells(net, i, grid, active_ix, active_iy, beta, True, cache)
    else:
        low, high = tag_thresholds(net, eps)
        result = _grid_cells(net, i, grid, active_ix, active_iy, high, False, cache)
        redo = np.flatnonzero(result == CellTag.MINUS)
        second = _grid_cells(net, i, grid, active_ix[redo], active_iy[redo], low, False, cache)
        result[redo] = np.where(second == CellTag.MINUS, CellTag.MINUS, CellTag.QUESTION)
    tags[active_iy, active_ix] = result

    qds = QDS(
        station=i,
        scheme=scheme,
        epsilon=float(eps),
        gamma=g,
        origin=origin_f,
        extent=(w, h),
        tags=tags,
    )
    logger.info(
        "QDS for station %s: scheme %s, gamma=%g, %dx%d cells, %d active, %d exact edge tests, %s",
        net.stations[i].id, scheme.value, g, w, h, active_ix.size, len(cache), qds.counts(),
    )
    return qds


def qds_query_many(qds: QDS, points: np.ndarray) -> np.ndarray:
    """
    Tags for an (m, 2) array of points. A point on a grid line belongs to the
    cell with the smaller index; anything outside the grid is minus.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    idx = np.ceil((pts - np.asarray(qds.origin)) / qds.gamma).astype(np.int64) - 1
    w, h = qds.extent
    inside = (idx[:, 0] >= 0) & (idx[:, 0] < w) & (idx[:, 1] >= 0) & (idx[:, 1] < h)
    out = np.full(pts.shape[0], CellTag.MINUS, dtype=np.uint8)
    out[inside] = qds.tags[idx[inside, 1], idx[inside, 0]]
    return out


def qds_query(qds: QDS, p: Sequence[float]) -> CellTag:
    """Tag of the cell containing p."""
    return CellTag(int(qds_query_many(qds, np.asarray(p, dtype=float))[0]))


# ============================================================================
# Binary format
# ============================================================================

MAGIC = b"SQDS"
VERSION = 1
HEADER = struct.Struct("<4sHBIdd2d2I")


def qds_serialize(qds: QDS) -> bytes:
    """Header followed by 2-bit tags, four per byte, lowest bits first."""
    w, h = qds.extent
    if w <= 0 or h <= 0:
        raise ValueError("cannot serialise a QDS with an empty extent")
    header = HEADER.pack(
        MAGIC, VERSION, qds.scheme.code, qds.station, qds.epsilon, qds.gamma,
        qds.origin[0], qds.origin[1], w, h,
    )
    flat = qds.tags.astype(np.uint8).ravel()
    padded = np.zeros(-(-flat.size // 4) * 4, dtype=np.uint8)
    padded[: flat.size] = flat
    packed = padded[0::4] | (padded[1::4] << 2) | (padded[2::4] << 4) | (padded[3::4] << 6)
    return header + packed.astype(np.uint8).tobytes()


def qds_deserialize(data: bytes) -> QDS:
    """
    Inverse of qds_serialize.
    Raises ValueError on a bad magic or version, an empty extent, or truncated data.
    """
    if len(data) < HEADER.size:
        raise ValueError(f"truncated QDS header: {len(data)} of {HEADER.size} bytes")
    magic, version, code, station, eps, gamma, ox, oy, w, h = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad QDS magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported QDS version {version}")
    if w == 0 or h == 0:
        raise ValueError("QDS has an empty extent")
    cells = w * h
    need = -(-cells // 4)
    payload = np.frombuffer(data[HEADER.size :], dtype=np.uint8)
    if payload.size < need:
        raise ValueError(f"truncated QDS payload: {payload.size} of {need} bytes")
    payload = payload[:need]
    unpacked = np.stack([(payload >> shift) & 0b11 for shift in (0, 2, 4, 6)], axis=1).ravel()
    return QDS(
        station=int(station),
        scheme=Scheme.from_code(code),
        epsilon=eps,
        gamma=gamma,
        origin=(ox, oy),
        extent=(int(w), int(h)),
        tags=unpacked[:cells].reshape(h, w).copy(),
    )


# ============================================================================
# Partition queries
# ============================================================================


def build_partition(
    net: Network, scheme: Scheme | str, epsilon: float, extent: Optional[float] = None
) -> list[QDS]:
    """One QDS per station."""
    return [qds_build(net, i, scheme, epsilon, extent) for i in range(net.n)]


def locate(net: Network, partition: Sequence[QDS], p: Sequence[float]) -> LocateResult:
    """
    Answers "which station is heard at p" with the weighted Voronoi owner's QDS.
    A minus tag there means no station is heard.
    """
    owner = weighted_voronoi_owner(net, p)
    tag = qds_query(partition[owner], p)
    if tag == CellTag.MINUS:
        return LocateResult(station=None, tag=tag.name.lower())
    return LocateResult(station=owner, tag=tag.name.lower())

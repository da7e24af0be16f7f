"""
Geometric analysis of reception zones: closed-form two-station zones, wires,
the maximum principle for interference, hyperbolic geodesics in dimension d+1,
the extreme constructions, and cell counting/area estimates in the plane.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from sinrmap.algebra import nonpositive_on, restrict_characteristic, to_fraction
from sinrmap.config import settings
from sinrmap.model import positions
from sinrmap.pointloc import CellTag, certify_edges, fatness_bounds, seg_test_silent
from sinrmap.schemas import (
    AreaReport,
    CellCountReport,
    Geodesic,
    Network,
    OmegaReport,
    SimilarityTransform,
    Station,
    TwoStationConfig,
    VerificationReport,
    Wire,
    WireNetwork,
    WireReport,
)
from sinrmap.sinr_core import (
    energy_matrix,
    heard_field,
    is_heard,
    max_sinr_envelope,
    sinr_field,
    sinr_matrix,
)

logger = logging.getLogger(__name__)

# Points handed to one vectorised evaluation
CHUNK = 200_000


def _chunked(fn: Callable[[np.ndarray], np.ndarray], points: np.ndarray) -> np.ndarray:
    if points.shape[0] <= CHUNK:
        return fn(points)
    return np.concatenate([fn(points[k : k + CHUNK]) for k in range(0, points.shape[0], CHUNK)])


# ============================================================================
# Two stations
# ============================================================================


def _householder_to_e1(direction: np.ndarray) -> np.ndarray:
    """Orthogonal H with H @ direction = e1 for a unit vector `direction`."""
    dim = direction.shape[0]
    e1 = np.zeros(dim)
    e1[0] = 1.0
    v = direction - e1
    norm2 = float(v @ v)
    if norm2 < 1e-30:
        return np.eye(dim)
    return np.eye(dim) - 2.0 * np.outer(v, v) / norm2


def two_station_config(
    net: Network, i: int = 0, exact: bool = False, boundary_samples: int = 64
) -> TwoStationConfig:
    """
    Closed-form zone of station i against the other station, in the frame
    where s_i is the origin and the other station sits at (a, 0, ...).

    With N = 0 the zone is {|x - a e1|^2 >= A |x|^2}, A = tau^(2/alpha),
    tau = beta * power_other / power_i: a disk for tau > 1, the complement of
    an open disk for tau < 1, and the halfplane x <= a/2 for tau = 1.
    With N > 0 the same classification is returned flagged approximate,
    together with boundary points found along rays from s_i.
    Raises ValueError unless n == 2, or when exact=True and N > 0.
    """
    if net.n != 2:
        raise ValueError(f"two-station analysis needs n=2, got {net.n}")
    if i not in (0, 1):
        raise ValueError(f"station index must be 0 or 1, got {i}")
    if exact and net.noise > 0:
        raise ValueError("closed form requires N = 0; drop exact to get a sampled boundary")

    other = 1 - i
    pts = positions(net)
    u = pts[other] - pts[i]
    a = float(np.linalg.norm(u))
    rotation = _householder_to_e1(u / a)
    transform = SimilarityTransform(
        rotation=tuple(tuple(float(v) for v in row) for row in rotation),
        translation=tuple(float(v) for v in -(rotation @ pts[i])),
        scale=1.0,
    )
    tau = net.beta * net.stations[other].power / net.stations[i].power
    big_a = tau ** (2.0 / net.alpha)
    dim = net.dim

    if math.isclose(tau, 1.0, rel_tol=0.0, abs_tol=1e-15):
        cfg = TwoStationConfig(
            kind="halfplane", station=i, tau=tau, a=a, alpha=net.alpha,
            offset=a / 2, transform=transform,
        )
    else:
        q = a / (1.0 - big_a)
        radius = a * math.sqrt(big_a) / abs(1.0 - big_a)
        cfg = TwoStationConfig(
            kind="disk" if tau > 1 else "disk_complement",
            station=i, tau=tau, a=a, alpha=net.alpha,
            center=(q,) + (0.0,) * (dim - 1), radius=radius, transform=transform,
        )
    if net.noise > 0:
        cfg = cfg.model_copy(
            update={"approximate": True, "boundary": _ray_boundary(net, i, cfg, boundary_samples)}
        )
    return cfg


def _ray_boundary(net: Network, i: int, cfg: TwoStationConfig, samples: int) -> list[tuple]:
    """First exit point of Z_i along rays from s_i, in the canonical frame."""
    rotation = np.array(cfg.transform.rotation)
    origin = np.asarray(net.stations[i].pos, dtype=float)
    reach = fatness_bounds(net, i).delta_hat * 1.001
    if net.dim == 1:
        directions = [np.array([1.0]), np.array([-1.0])]
    else:
        directions = []
        for theta in np.linspace(0.0, 2 * math.pi, samples, endpoint=False):
            d = np.zeros(net.dim)
            d[0], d[1] = math.cos(theta), math.sin(theta)
            directions.append(d)

    out = []
    radii = np.linspace(0.0, reach, 513)[1:]
    for d in directions:
        world = rotation.T @ d
        ray = origin + radii[:, None] * world
        heard = sinr_field(net, i, ray) >= net.beta
        misses = np.flatnonzero(~heard)
        if misses.size == 0:
            continue
        k = int(misses[0])
        lo = 0.0 if k == 0 else radii[k - 1]
        hi = radii[k]

        def excess(r: float) -> float:
            value = sinr_field(net, i, origin + r * world)[0]
            return min(value, 1e300) - net.beta

        r = brentq(excess, max(lo, 1e-300), hi)
        out.append(tuple(float(v) for v in r * d))
    return out


def two_station_contains(cfg: TwoStationConfig, points: np.ndarray) -> np.ndarray:
    """Membership of original-frame points in the closed-form zone."""
    rotation = np.array(cfg.transform.rotation)
    shift = np.asarray(cfg.transform.translation)
    pts = np.asarray(points, dtype=float).reshape(-1, rotation.shape[0])
    local = pts @ rotation.T + shift
    if cfg.kind == "halfplane":
        return local[:, 0] <= cfg.offset
    dist2 = np.sum((local - np.asarray(cfg.center)) ** 2, axis=1)
    if cfg.kind == "disk":
        return dist2 <= cfg.radius**2
    return dist2 >= cfg.radius**2


# ============================================================================
# Wires
# ============================================================================


def wire_interference_field(w: Wire, points: np.ndarray) -> np.ndarray:
    """P / |r^2 - d(q, k)^2| for each point; +inf on the wire itself."""
    pts = np.asarray(points, dtype=float).reshape(-1, len(w.center))
    d2 = np.sum((pts - np.asarray(w.center)) ** 2, axis=1)
    gap = np.abs(w.radius**2 - d2)
    with np.errstate(divide="ignore"):
        return np.where(gap > 0, w.power / gap, np.inf)


def wire_interference(w: Wire, k: Sequence[float]) -> float:
    """
    Interference of a continuous wire at k.
    Raises ValueError when k lies on the wire.
    """
    d = float(np.linalg.norm(np.asarray(k, dtype=float) - np.asarray(w.center)))
    if math.isclose(d, w.radius, rel_tol=1e-12, abs_tol=0.0):
        raise ValueError("wire interference is singular on the wire")
    return w.power / abs(w.radius**2 - d**2)


def wire_stations(w: Wire, chi: int) -> np.ndarray:
    """(chi, 2) positions q + r(cos 2 pi j/chi, sin 2 pi j/chi)."""
    if chi < 1:
        raise ValueError(f"chi must be positive, got {chi}")
    angles = 2 * np.pi * np.arange(chi) / chi
    return np.asarray(w.center) + w.radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def discrete_wire_interference(w: Wire, chi: int, k: Sequence[float], alpha: float = 2.0) -> float:
    """
    Interference at k of chi stations of power P/chi spread evenly on the wire.
    Raises ValueError when k coincides with one of them.
    """
    d = np.linalg.norm(wire_stations(w, chi) - np.asarray(k, dtype=float), axis=1)
    if np.any(d == 0.0):
        raise ValueError("point coincides with a wire station")
    return float(np.sum((w.power / chi) * d ** (-alpha)))


def wire_dummy_station(w: Wire, k: Sequence[float]) -> Station:
    """
    A single station of power P with the wire's interference at k (alpha = 2).
    Seen from outside it is the tangent point of a line through k; seen from
    inside it is the end of the chord through k perpendicular to q - k.
    """
    point = np.asarray(k, dtype=float)
    offset = point - np.asarray(w.center)
    d = float(np.linalg.norm(offset))
    if math.isclose(d, w.radius, rel_tol=1e-12, abs_tol=0.0):
        raise ValueError("wire interference is singular on the wire")
    reach = math.sqrt(abs(w.radius**2 - d**2))
    radial = offset / d if d > 0 else np.array([1.0, 0.0])
    normal = np.array([-radial[1], radial[0]])
    if d > w.radius:
        # tangent point seen from k: angle acos(r/d) off the radial direction
        cos_t = w.radius / d
        sin_t = reach / d
        pos = np.asarray(w.center) + w.radius * (cos_t * radial + sin_t * normal)
    else:
        pos = point + reach * normal
    return Station(id="wire", pos=tuple(float(v) for v in pos), power=w.power)


def average_circle_interference(
    net: Network, exclude: int, center: Sequence[float], radius: float
) -> float:
    """
    Mean interference over the circle B(q, r): sum of power_j / |d(s_j, q)^2 - r^2|
    over j != exclude (alpha = 2).
    Raises ValueError when an interferer lies on the circle.
    """
    q = np.asarray(center, dtype=float)
    total = 0.0
    for j, station in enumerate(net.stations):
        if j == exclude:
            continue
        d = float(np.linalg.norm(np.asarray(station.pos) - q))
        if math.isclose(d, radius, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError(f"station {station.id} lies on the circle")
        total += station.power / abs(d**2 - radius**2)
    return total


def wire_network_sinr(wnet: WireNetwork, i: int, points: np.ndarray) -> np.ndarray:
    """SINR of station i with wires entering as analytic interference; 0 on a wire."""
    net = wnet.network
    pts = np.asarray(points, dtype=float).reshape(-1, net.dim)
    e = energy_matrix(net, pts)
    others = np.sum(np.delete(e, i, axis=0), axis=0)
    for w in wnet.wires:
        others = others + wire_interference_field(w, pts)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = e[i] / (others + net.noise)
    s[np.isinf(others)] = 0.0
    s[np.isinf(e[i])] = np.inf
    return s


def wire_ray_cells(
    wnet: WireNetwork, i: int = 0, x_max: Optional[float] = None, samples: int = 100_000
) -> int:
    """
    Heard runs of station i along the ray s_i + x e1, x in [0, x_max].
    Raises ValueError when N = 0 and no x_max is given.
    """
    net = wnet.network
    if x_max is None:
        if net.noise == 0:
            raise ValueError("x_max required when noise is zero")
        x_max = 1.01 * (net.stations[i].power / (net.beta * net.noise)) ** (1.0 / net.alpha)
    xs = np.linspace(0.0, x_max, samples)
    ray = np.asarray(net.stations[i].pos) + xs[:, None] * np.eye(net.dim)[0]
    heard = wire_network_sinr(wnet, i, ray) >= net.beta
    starts = heard[1:] & ~heard[:-1]
    return int(heard[0]) + int(np.count_nonzero(starts))


# ============================================================================
# Maximum principle
# ============================================================================


def _interference_at(net: Network, exclude: int, points: np.ndarray) -> np.ndarray:
    e = energy_matrix(net, points)
    return np.sum(np.delete(e, exclude, axis=0), axis=0)


def _check_disk(net: Network, exclude: int | None, center: np.ndarray, radius: float) -> None:
    if net.dim != 2:
        raise ValueError(f"maximum-principle checks are planar, got dim={net.dim}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    d = np.linalg.norm(positions(net) - center, axis=1)
    for j, dj in enumerate(d):
        if j != exclude and dj <= radius:
            raise ValueError(f"station {net.stations[j].id} lies inside the disk")


def _boundary_max(fn: Callable[[np.ndarray], np.ndarray], center: np.ndarray, radius: float, samples: int):
    angles = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    ring = center + radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    values = fn(ring)
    best = float(values.max())
    best_angle = float(angles[np.argmax(values)])
    step = 2 * np.pi / samples
    peaks = np.flatnonzero((values >= np.roll(values, 1)) & (values >= np.roll(values, -1)))
    for k in peaks:
        res = minimize_scalar(
            lambda t: -fn((center + radius * np.array([math.cos(t), math.sin(t)]))[None, :])[0],
            bounds=(angles[k] - step, angles[k] + step),
            method="bounded",
        )
        if -res.fun > best:
            best, best_angle = float(-res.fun), float(res.x)
    return best, best_angle


def _interior_lattice(center: np.ndarray, radius: float, per_axis: int) -> np.ndarray:
    axis = np.linspace(-radius, radius, per_axis)
    gx, gy = np.meshgrid(axis, axis)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    return center + pts[np.linalg.norm(pts, axis=1) < radius]


def max_principle_check(
    net: Network,
    exclude: int,
    center: Sequence[float],
    radius: float,
    samples: int = 360,
    instance_seed: Optional[int] = None,
) -> VerificationReport:
    """
    Interference of every station but `exclude` must peak on the boundary of
    the disk: the interior lattice maximum may exceed the boundary maximum by
    at most 1e-9.
    Raises ValueError when another station lies in the closed disk.
    """
    c = np.asarray(center, dtype=float)
    _check_disk(net, exclude, c, radius)
    samples = max(samples, 360)
    def fn(pts: np.ndarray) -> np.ndarray:
        return _interference_at(net, exclude, pts)

    boundary, angle = _boundary_max(fn, c, radius, samples)
    inner = _interior_lattice(c, radius, 101)
    values = fn(inner)
    k = int(np.argmax(values))
    passed = float(values[k]) <= boundary + 1e-9
    witness = None
    if not passed:
        witness = {
            "point": inner[k].tolist(),
            "interior_max": float(values[k]),
            "boundary_max": boundary,
            "boundary_angle": angle,
        }
    return VerificationReport(
        check="maxprinciple", instance_seed=instance_seed, passed=passed, witness=witness
    )


def sinr_max_principle_sample(
    net: Network, i: int, center: Sequence[float], radius: float, samples: int = 360
) -> dict:
    """
    Interior and boundary maxima of SINR(s_i, .) over a station-free disk.
    Reported only; whether SINR itself obeys the principle is open.
    """
    c = np.asarray(center, dtype=float)
    _check_disk(net, None, c, radius)
    def fn(pts: np.ndarray) -> np.ndarray:
        return sinr_field(net, i, pts)

    boundary, _ = _boundary_max(fn, c, radius, max(samples, 360))
    interior = float(fn(_interior_lattice(c, radius, 101)).max())
    return {"interior_max": interior, "boundary_max": boundary, "holds": interior <= boundary + 1e-9}


# ============================================================================
# Hyperbolic geodesics in the upper half-space
# ============================================================================


def embed_network(net: Network) -> Network:
    """Lifts a d-dimensional network into d+1 with stations on x_{d+1} = 0."""
    stations = tuple(
        Station(id=s.id, pos=tuple(s.pos) + (0.0,), power=s.power) for s in net.stations
    )
    return net.model_copy(update={"dim": net.dim + 1, "stations": stations})


def hyperbolic_geodesic(p1: Sequence[float], p2: Sequence[float]) -> Geodesic:
    """
    Geodesic between two points of the same closed half-space x_last >= 0 (or <= 0):
    a vertical segment when their projections coincide, otherwise the arc of the
    circle centred on x_last = 0 that passes through both.
    Raises ValueError for points on opposite sides or of different dimension.
    """
    a = np.asarray(p1, dtype=float)
    b = np.asarray(p2, dtype=float)
    if a.shape != b.shape or a.size < 2:
        raise ValueError("geodesic endpoints need the same dimension, at least 2")
    h1, h2 = a[-1], b[-1]
    if np.sign(h1) * np.sign(h2) < 0:
        raise ValueError("geodesic endpoints lie on opposite sides of the base hyperplane")
    u = b[:-1] - a[:-1]
    span = float(np.linalg.norm(u))
    if span == 0.0:
        return Geodesic(kind="vertical_segment", p1=tuple(a), p2=tuple(b))

    lam = (span**2 + h2**2 - h1**2) / (2 * span**2)
    base = a[:-1] + lam * u
    radius = math.sqrt((lam * span) ** 2 + h1**2)
    direction = u / span
    angles = (
        math.atan2(h1, float((a[:-1] - base) @ direction)),
        math.atan2(h2, float((b[:-1] - base) @ direction)),
    )
    if min(h1, h2) < 0:
        # lower half-space: keep both angles in [-pi, 0]
        angles = tuple(-math.pi if t == math.pi else t for t in angles)
    return Geodesic(
        kind="arc",
        p1=tuple(a),
        p2=tuple(b),
        center=tuple(base) + (0.0,),
        radius=radius,
        direction=tuple(direction),
        angles=angles,
    )


def geodesic_points(g: Geodesic, samples: int) -> np.ndarray:
    """Points spaced uniformly in parameter (segments) or angle (arcs), endpoints included."""
    t = np.linspace(0.0, 1.0, samples)
    a = np.asarray(g.p1)
    b = np.asarray(g.p2)
    if g.kind == "vertical_segment":
        return a + t[:, None] * (b - a)
    theta = g.angles[0] + t * (g.angles[1] - g.angles[0])
    base = np.asarray(g.center)[:-1]
    direction = np.asarray(g.direction)
    flat = base + (g.radius * np.cos(theta))[:, None] * direction
    return np.concatenate([flat, (g.radius * np.sin(theta))[:, None]], axis=1)


def hyperbolic_reception_check(
    net: Network,
    i: int,
    p1: Sequence[float],
    p2: Sequence[float],
    samples: Optional[int] = None,
    instance_seed: Optional[int] = None,
) -> VerificationReport:
    """
    Samples the geodesic between two reception points of s_i in a network whose
    stations lie on x_last = 0 and checks SINR >= beta - 1e-9 along it.
    Raises ValueError when the stations are off the base hyperplane or an
    endpoint is not heard.
    """
    if any(s.pos[-1] != 0.0 for s in net.stations):
        raise ValueError("stations must lie on the base hyperplane; use embed_network")
    for p in (p1, p2):
        if not is_heard(net, i, p):
            raise ValueError(f"endpoint {tuple(p)} is not a reception point of station {i}")
    samples = max(samples or settings.geodesic_samples, settings.geodesic_samples)
    g = hyperbolic_geodesic(p1, p2)
    pts = geodesic_points(g, samples)
    values = sinr_field(net, i, pts)
    k = int(np.argmin(values))
    passed = bool(values[k] >= net.beta - 1e-9)
    witness = None
    if not passed:
        witness = {"point": pts[k].tolist(), "sinr": float(values[k]), "kind": g.kind}
    return VerificationReport(
        check="hyperbolic", instance_seed=instance_seed, passed=passed, witness=witness
    )


# ============================================================================
# Extreme constructions
# ============================================================================


def omega_limits(n: int, radius: float) -> tuple[float, float]:
    """(L, U): s_0's power must lie in [L, U) for the construction to work."""
    m = n * n - 1
    lower = (5 + 4 * m / (3 * radius**2)) * radius**2
    upper = (5.8 + m / (27 * radius**2)) * (radius - 1) ** 2
    return lower, upper


def construct_omega_n(n: int, r2_samples: int = 100) -> tuple[Network, OmegaReport]:
    """
    Station s_0 at the origin plus n unit-power squares of four stations centred
    on a circle of radius R, so that s_0 is heard at every square centre and
    nowhere on the square outlines: s_0 ends up with n + 1 cells.
    R is the first integer from 2n+1 with U > L and P_0 = (L + U) / 2.
    Raises ValueError for n < 2.
    """
    if n < 2:
        raise ValueError(f"construction needs n >= 2, got {n}")
    radius = None
    for candidate in range(2 * n + 1, settings.omega_radius_cap + 1):
        lower, upper = omega_limits(n, candidate)
        if upper > lower:
            radius = candidate
            break
    if radius is None:
        lower, upper = omega_limits(n, settings.omega_radius_cap)
        logger.warning("no feasible radius up to %d for n=%d", settings.omega_radius_cap, n)
        report = OmegaReport(
            n=n, radius=settings.omega_radius_cap, p0=0.0, lower=lower, upper=upper,
            feasible=False, r1_passed=False, r2_passed=False, r2_samples=0,
            min_center_sinr=0.0, max_boundary_sinr=0.0,
        )
        return _omega_network(n, settings.omega_radius_cap, lower), report

    p0 = (lower + upper) / 2
    net = _omega_network(n, radius, p0)
    centres = _omega_centres(n, radius)

    centre_sinr = sinr_field(net, 0, centres)
    per_side = max(1, -(-r2_samples // 4))
    outline = np.concatenate([_square_outline(c, per_side) for c in centres])
    boundary_sinr = sinr_field(net, 0, outline)

    report = OmegaReport(
        n=n,
        radius=radius,
        p0=p0,
        lower=lower,
        upper=upper,
        feasible=True,
        r1_passed=bool(np.all(centre_sinr >= 1.0)),
        r2_passed=bool(np.all(boundary_sinr < 1.0)),
        r2_samples=4 * per_side,
        min_center_sinr=float(centre_sinr.min()),
        max_boundary_sinr=float(boundary_sinr.max()),
    )
    logger.info("omega construction n=%d: R=%d, P0=%.6g, R1=%s, R2=%s",
                n, radius, p0, report.r1_passed, report.r2_passed)
    return net, report


def _omega_centres(n: int, radius: float) -> np.ndarray:
    angles = 2 * np.pi * np.arange(n) / n
    return radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _square_outline(centre: np.ndarray, per_side: int) -> np.ndarray:
    """Samples on the square with corners centre + (+-1/sqrt 2, +-1/sqrt 2), corners skipped."""
    h = 1 / math.sqrt(2)
    t = (np.arange(per_side) + 0.5) / per_side * 2 * h - h
    sides = [
        np.stack([t, np.full_like(t, -h)], axis=1),
        np.stack([t, np.full_like(t, h)], axis=1),
        np.stack([np.full_like(t, -h), t], axis=1),
        np.stack([np.full_like(t, h), t], axis=1),
    ]
    return centre + np.concatenate(sides)


def _omega_network(n: int, radius: float, p0: float) -> Network:
    h = 1 / math.sqrt(2)
    stations = [Station(id="s0", pos=(0.0, 0.0), power=p0)]
    for k, c in enumerate(_omega_centres(n, radius)):
        for label, (dx, dy) in zip("abcd", [(-h, -h), (h, -h), (h, h), (-h, h)]):
            stations.append(
                Station(id=f"sq{k}{label}", pos=(float(c[0] + dx), float(c[1] + dy)), power=1.0)
            )
    return Network(dim=2, alpha=2.0, beta=1.0, noise=1.0, stations=tuple(stations))


def omega_cell_count(net: Network, report: OmegaReport, grid_step: float = 0.1,
                     max_refinements: Optional[int] = None) -> CellCountReport:
    """Cells of s_0 in the box just around the squares."""
    reach = report.radius + 2.0
    return count_cells_2d(
        net, 0, grid_step=grid_step, bounds=(-reach, -reach, reach, reach),
        max_refinements=max_refinements,
    )


def log_wire_feasibility_bound(rho: int, noise: float) -> float:
    """16^(rho-1) (7 + N): enough power for every test point to be heard."""
    return 16.0 ** (rho - 1) * (7.0 + noise)


def construct_log_wires(rho: int, p1: float, noise: float = 1.0) -> tuple[WireNetwork, WireReport]:
    """
    Station s_1 of power p1 at the origin inside rho unit-power wires of radii
    4^0, ..., 4^(rho-1); each ring between wires, and the outside, holds a cell of s_1.
    Test points are the origin and x = 2 * 4^k for k = 0..rho-1.
    Raises ValueError for rho < 1 or a non-positive p1.
    """
    if rho < 1:
        raise ValueError(f"rho must be at least 1, got {rho}")
    if not p1 > 0:
        raise ValueError(f"p1 must be positive, got {p1}")
    radii = [4.0**k for k in range(rho)]
    wires = [Wire(center=(0.0, 0.0), radius=r, power=1.0) for r in radii]
    station = Station(id="s1", pos=(0.0, 0.0), power=p1)
    network = Network(dim=2, alpha=2.0, beta=1.0, noise=noise, stations=(station,))
    wnet = WireNetwork(network=network, wires=wires)

    xs = [0.0] + [2.0 * r for r in radii]
    values, inner, outer = [], [], []
    for x in xs:
        inner.append(sum(1.0 / (x * x - r * r) for r in radii if r < x))
        outer.append(sum(1.0 / (r * r - x * x) for r in radii if r > x))
        values.append(float(wire_network_sinr(wnet, 0, np.array([[x, 0.0]]))[0]))

    bound = log_wire_feasibility_bound(rho, noise)
    feasible = p1 >= bound
    passed = feasible and all(v >= 1.0 for v in values)
    report = WireReport(
        rho=rho, p1=p1, noise=noise, feasibility_bound=bound, feasible=feasible,
        test_points=xs, sinr_values=[min(v, 1e308) for v in values],
        inner_interference=inner, outer_interference=outer, passed=passed,
    )
    return wnet, report


# ============================================================================
# Cell counting and area in the plane
# ============================================================================


def milnor_thom_reference(net: Network, zone: Optional[int]) -> int:
    """K (2K - 1)^(d-1) with K = deg + 1; deg is alpha n (station) or alpha n^2 (silent zone)."""
    alpha = math.ceil(net.alpha)
    degree = alpha * net.n if zone is not None else alpha * net.n**2
    k = degree + 1
    return k * (2 * k - 1) ** (net.dim - 1)


def default_bounds(net: Network, zone: Optional[int]) -> tuple[float, float, float, float]:
    """
    Box around B(s_i, delta_hat), or for the silent zone the box around every
    station's ball grown by 10%.
    Raises ValueError when N = 0.
    """
    if net.noise == 0:
        raise ValueError("bounds required when noise is zero")
    if zone is not None:
        r = fatness_bounds(net, zone).delta_hat
        x, y = net.stations[zone].pos
        return (x - r, y - r, x + r, y + r)
    boxes = []
    for j, s in enumerate(net.stations):
        r = fatness_bounds(net, j).delta_hat
        boxes.append((s.pos[0] - r, s.pos[1] - r, s.pos[0] + r, s.pos[1] + r))
    x0 = min(b[0] for b in boxes)
    y0 = min(b[1] for b in boxes)
    x1 = max(b[2] for b in boxes)
    y1 = max(b[3] for b in boxes)
    gx, gy = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    return (x0 - gx, y0 - gy, x1 + gx, y1 + gy)


@dataclass
class ZoneGrid:
    """Component labels of a zone sampled at cell centres; -1 off the zone."""

    labels: np.ndarray
    count: int
    step: float
    origin: tuple[float, float]


def _silent_links(net: Network, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """1 linked, 0 broken, -1 undecided for segments that should stay silent."""
    margin = settings.certificate_margin
    hi_thr = net.beta * (1 + margin)
    lo_thr = net.beta * (1 - margin)
    codes = np.full(starts.shape[0], -1, dtype=np.int8)
    if codes.size == 0:
        return codes
    loud = (np.max(sinr_matrix(net, starts), axis=0) >= hi_thr) | (
        np.max(sinr_matrix(net, ends), axis=0) >= hi_thr
    )
    codes[loud] = 0
    scale = 1.0 + float(np.abs(starts).max())
    for level in range(settings.link_max_depth + 1):
        todo = np.flatnonzero(codes < 0)
        if todo.size == 0:
            break
        k = 2**level
        frac = (np.arange(k) + 0.5) / k
        a, b = starts[todo], ends[todo]
        pts = (a[:, None, :] + frac[None, :, None] * (b - a)[:, None, :]).reshape(-1, 2)
        radius = np.repeat(np.linalg.norm(b - a, axis=1) / (2 * k) * (1 + 1e-9) + 1e-12 * scale, k)
        values = np.max(sinr_matrix(net, pts), axis=0).reshape(-1, k)
        _, upper = max_sinr_envelope(net, pts, radius)
        upper = upper.reshape(-1, k)
        codes[todo[(values >= hi_thr).any(axis=1)]] = 0
        quiet = (upper < lo_thr).all(axis=1) & (codes[todo] < 0)
        codes[todo[quiet]] = 1
    return codes


def _segment_chunks(fn, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    if starts.shape[0] == 0:
        return np.zeros(0, dtype=np.int8)
    return np.concatenate(
        [fn(starts[k : k + CHUNK], ends[k : k + CHUNK]) for k in range(0, starts.shape[0], CHUNK)]
    )


def _zone_links(net: Network, zone: Optional[int], starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Whether each centre-to-centre segment lies inside the zone."""
    if zone is not None:
        tags = _segment_chunks(
            lambda a, b: certify_edges(net, zone, net.beta, a, b, depth=settings.link_max_depth),
            starts,
            ends,
        )
        linked = tags == CellTag.PLUS
        pending = np.flatnonzero(tags < 0)
        degree = net.alpha * net.n
    else:
        codes = _segment_chunks(lambda a, b: _silent_links(net, a, b), starts, ends)
        linked = codes == 1
        pending = np.flatnonzero(codes < 0)
        degree = net.alpha * net.n**2

    exact_ok = (
        float(net.alpha).is_integer() and int(net.alpha) % 2 == 0
        and degree <= settings.exact_max_degree
        and (zone is not None or not net.overlapping_zones)
    )
    if pending.size and not exact_ok:
        logger.debug("%d segment(s) left undecided, treated as broken", pending.size)
        return linked
    for k in pending.tolist():
        a = [to_fraction(float(v)) for v in starts[k]]
        b = [to_fraction(float(v)) for v in ends[k]]
        if zone is not None:
            linked[k] = nonpositive_on(restrict_characteristic(net, zone, a, b), 0, 1)
        else:
            linked[k] = seg_test_silent(net, a, b) == CellTag.PLUS
    if pending.size:
        logger.debug("%d exact segment test(s)", pending.size)
    return linked


def label_zone_grid(
    net: Network,
    zone: Optional[int],
    grid_step: float,
    bounds: tuple[float, float, float, float],
) -> ZoneGrid:
    """
    Samples the zone at cell centres and joins neighbouring member cells whose
    connecting segment provably stays in the zone; components are the cells.
    """
    x0, y0, x1, y1 = bounds
    w = max(1, math.ceil((x1 - x0) / grid_step))
    h = max(1, math.ceil((y1 - y0) / grid_step))
    if w * h > settings.flood_max_cells:
        raise ValueError(f"grid of {w}x{h} cells exceeds flood_max_cells={settings.flood_max_cells}")
    xs = x0 + (np.arange(w) + 0.5) * grid_step
    ys = y0 + (np.arange(h) + 0.5) * grid_step
    gx, gy = np.meshgrid(xs, ys)
    centres = np.stack([gx.ravel(), gy.ravel()], axis=1)

    if zone is None:
        member = _chunked(lambda p: heard_field(net, p) < 0, centres)
    else:
        member = _chunked(lambda p: sinr_field(net, zone, p) >= net.beta, centres)
    member = member.reshape(h, w)

    index = np.full((h, w), -1, dtype=np.int64)
    index[member] = np.arange(int(member.sum()))
    pairs = []
    for a_sel, b_sel in (
        ((slice(None), slice(None, -1)), (slice(None), slice(1, None))),
        ((slice(None, -1), slice(None)), (slice(1, None), slice(None))),
    ):
        both = member[a_sel] & member[b_sel]
        a_idx = index[a_sel][both]
        b_idx = index[b_sel][both]
        a_pts = centres.reshape(h, w, 2)[a_sel][both]
        b_pts = centres.reshape(h, w, 2)[b_sel][both]
        linked = _zone_links(net, zone, a_pts, b_pts)
        pairs.append((a_idx[linked], b_idx[linked]))

    m = int(member.sum())
    rows = np.concatenate([p[0] for p in pairs])
    cols = np.concatenate([p[1] for p in pairs])
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(m, m)).tocsr()
    count, comp = connected_components(graph, directed=False) if m else (0, np.zeros(0, dtype=np.int64))
    labels = np.full((h, w), -1, dtype=np.int64)
    labels[member] = comp
    return ZoneGrid(labels=labels, count=int(count), step=grid_step, origin=(x0, y0))


def count_cells_2d(
    net: Network,
    zone: Optional[int],
    grid_step: Optional[float] = None,
    bounds: Optional[tuple[float, float, float, float]] = None,
    max_refinements: Optional[int] = None,
) -> CellCountReport:
    """
    Number of cells of Z_i (zone = i) or of the silent zone (zone = None) inside
    `bounds`, halving the grid step until the count repeats twice in a row.
    The result depends on grid resolution; cells thinner than the grid can be missed.
    Raises ValueError for non-planar networks or missing bounds when N = 0.
    """
    if net.dim != 2:
        raise ValueError(f"2D cell counting needs dim=2, got dim={net.dim}")
    if zone is not None and not 0 <= zone < net.n:
        raise ValueError(f"station index {zone} out of range for {net.n} stations")
    box = tuple(float(v) for v in (bounds or default_bounds(net, zone)))
    if not (box[2] > box[0] and box[3] > box[1]):
        raise ValueError(f"bounds must have positive area, got {box}")
    step = grid_step or max(box[2] - box[0], box[3] - box[1]) / 256
    if not step > 0:
        raise ValueError(f"grid step must be positive, got {step}")
    rounds = settings.flood_max_refinements if max_refinements is None else max_refinements

    history: list[int] = []
    used = step
    converged = False
    for refinement in range(rounds + 1):
        cells = math.ceil((box[2] - box[0]) / step) * math.ceil((box[3] - box[1]) / step)
        if cells > settings.flood_max_cells:
            logger.warning("stopping refinement: %d cells exceed flood_max_cells", cells)
            break
        history.append(label_zone_grid(net, zone, step, box).count)
        used = step
        logger.debug("grid step %g: %d cell(s)", step, history[-1])
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            converged = True
            break
        step /= 2
    if not history:
        raise ValueError("grid step too small for flood_max_cells")
    if not converged:
        logger.warning("cell count did not settle: history %s", history)
    return CellCountReport(
        zone="none" if zone is None else net.stations[zone].id,
        count=history[-1],
        grid_step=used,
        refinements=len(history) - 1,
        converged=converged,
        history=history,
        bounds=box,
        milnor_thom_reference=milnor_thom_reference(net, zone),
    )


def area_estimate(net: Network, i: int, grid_step: Optional[float] = None) -> AreaReport:
    """
    Grid estimate of area(Z_i) checked against pi rho_hat^2 <= area <= pi delta_hat^2.
    Each check allows one boundary layer of cells, sqrt(2) gamma times the perimeter bound.
    Raises ValueError when N = 0 or dim != 2.
    """
    if net.dim != 2:
        raise ValueError(f"area estimates need dim=2, got dim={net.dim}")
    if net.noise == 0:
        raise ValueError("area estimate requires N > 0")
    fb = fatness_bounds(net, i)
    step = grid_step or fb.delta_hat / 200
    x0, y0, x1, y1 = default_bounds(net, i)
    w = math.ceil((x1 - x0) / step)
    h = math.ceil((y1 - y0) / step)
    if w * h > settings.flood_max_cells:
        raise ValueError(f"grid of {w}x{h} cells exceeds flood_max_cells={settings.flood_max_cells}")
    xs = x0 + (np.arange(w) + 0.5) * step
    ys = y0 + (np.arange(h) + 0.5) * step
    gx, gy = np.meshgrid(xs, ys)
    centres = np.stack([gx.ravel(), gy.ravel()], axis=1)
    inside = _chunked(lambda p: sinr_field(net, i, p) >= net.beta, centres)
    area = float(np.count_nonzero(inside)) * step * step

    lower = math.pi * fb.rho_hat**2
    upper = math.pi * fb.delta_hat**2
    slack = math.sqrt(2) * step * fb.perimeter_bound
    return AreaReport(
        station=i,
        area=area,
        grid_step=step,
        lower_bound=lower,
        upper_bound=upper,
        lower_ok=area + slack >= lower,
        upper_ok=area <= upper + slack,
    )

"""
Floating-point evaluation of energy, interference and SINR, the reception
predicates, and the weighted Voronoi owner.

Scalar functions take a station index and a point; the *_field / *_matrix
variants evaluate many points at once and are what sampling code uses.
"""
import logging
from typing import Sequence

import numpy as np

from sinrmap.model import positions, powers
from sinrmap.schemas import Network, ReceptionTag

logger = logging.getLogger(__name__)


def _as_point(net: Network, p: Sequence[float]) -> np.ndarray:
    point = np.asarray(p, dtype=float)
    if point.shape != (net.dim,):
        raise ValueError(f"point must have {net.dim} coordinate(s), got {tuple(point.shape)}")
    return point


def _distances(net: Network, p: np.ndarray) -> np.ndarray:
    return np.linalg.norm(positions(net) - p, axis=1)


def energy(net: Network, i: int, p: Sequence[float]) -> float:
    """
    E(s_i, p) = power_i * dist(s_i, p)^-alpha.
    Raises ValueError at the station's own position, where energy is undefined.
    """
    point = _as_point(net, p)
    d = float(np.linalg.norm(np.asarray(net.stations[i].pos) - point))
    if d == 0.0:
        raise ValueError(f"energy undefined at station {net.stations[i].id}")
    return net.stations[i].power * d ** (-net.alpha)


def interference(net: Network, exclude: int, p: Sequence[float]) -> float:
    """
    Sum of energies of every station except `exclude`.
    Raises ValueError when p sits on one of the summed stations.
    """
    point = _as_point(net, p)
    d = _distances(net, point)
    mask = np.arange(net.n) != exclude
    if np.any(d[mask] == 0.0):
        raise ValueError("interference undefined at an interfering station")
    return float(np.sum(powers(net)[mask] * d[mask] ** (-net.alpha)))


def sinr(net: Network, i: int, p: Sequence[float]) -> float:
    """
    E(s_i, p) / (interference + N).
    Raises ValueError at any station position (SINR is undefined on S).
    """
    point = _as_point(net, p)
    if np.any(_distances(net, point) == 0.0):
        raise ValueError("SINR undefined at station positions")
    return energy(net, i, point) / (interference(net, i, point) + net.noise)


def sinr_reciprocal(net: Network, i: int, p: Sequence[float]) -> float:
    """(interference + N) / E(s_i, p); same domain as sinr."""
    point = _as_point(net, p)
    if np.any(_distances(net, point) == 0.0):
        raise ValueError("SINR undefined at station positions")
    return (interference(net, i, point) + net.noise) / energy(net, i, point)


def is_heard(net: Network, i: int, p: Sequence[float], beta: float | None = None) -> bool:
    """
    True iff SINR(s_i, p) >= beta, or p is s_i's own position.
    An interferer's exact position is never heard for s_i.
    """
    point = _as_point(net, p)
    d = _distances(net, point)
    if d[i] == 0.0:
        return True
    if np.any(d == 0.0):
        return False
    threshold = net.beta if beta is None else beta
    return sinr(net, i, point) >= threshold


def heard_station(net: Network, p: Sequence[float]) -> ReceptionTag:
    """
    Station heard at p, or silent.
    For beta >= 1 at most one station qualifies; the lowest index wins exact ties.
    For beta < 1 the strongest qualifying station is returned and flagged
    non-unique when several qualify.
    """
    point = _as_point(net, p)
    d = _distances(net, point)
    on_station = np.flatnonzero(d == 0.0)
    if on_station.size:
        return ReceptionTag(station=int(on_station[0]), unique=True)

    values = np.array([sinr(net, k, point) for k in range(net.n)])
    heard = np.flatnonzero(values >= net.beta)
    if heard.size == 0:
        return ReceptionTag(station=None)
    if not net.overlapping_zones:
        return ReceptionTag(station=int(heard[0]), unique=True)
    best = int(heard[np.argmax(values[heard])])
    return ReceptionTag(station=best, unique=heard.size == 1)


def weighted_voronoi_owner(net: Network, p: Sequence[float]) -> int:
    """
    argmax_i power_i^(1/alpha) / dist(s_i, p); ties go to the lower index,
    and a point on a station belongs to that station.
    """
    point = _as_point(net, p)
    d = _distances(net, point)
    on_station = np.flatnonzero(d == 0.0)
    if on_station.size:
        return int(on_station[0])
    weights = powers(net) ** (1.0 / net.alpha)
    return int(np.argmax(weights / d))


# ============================================================================
# Vectorised evaluation
# ============================================================================


def distance_matrix(net: Network, points: np.ndarray) -> np.ndarray:
    """(n, m) distances from every station to every point."""
    pts = np.asarray(points, dtype=float).reshape(-1, net.dim)
    return np.linalg.norm(positions(net)[:, None, :] - pts[None, :, :], axis=2)


def energy_matrix(net: Network, points: np.ndarray) -> np.ndarray:
    """(n, m) energies; +inf where a point coincides with a station."""
    d = distance_matrix(net, points)
    with np.errstate(divide="ignore"):
        return powers(net)[:, None] * d ** (-net.alpha)


def sinr_matrix(net: Network, points: np.ndarray) -> np.ndarray:
    """
    (n, m) SINR of every station at every point.
    At a station position that station gets +inf and every other station 0.
    """
    e = energy_matrix(net, points)
    n = net.n
    out = np.empty_like(e)
    with np.errstate(invalid="ignore", divide="ignore"):
        for k in range(n):
            others = np.sum(e[np.arange(n) != k], axis=0)
            out[k] = e[k] / (others + net.noise)
    at_station = np.isinf(e)
    hit = at_station.any(axis=0)
    out[:, hit] = 0.0
    out[at_station] = np.inf
    return out


def sinr_field(net: Network, i: int, points: np.ndarray) -> np.ndarray:
    """(m,) SINR of station i, with the same station-position convention as sinr_matrix."""
    e = energy_matrix(net, points)
    others = np.sum(np.delete(e, i, axis=0), axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = e[i] / (others + net.noise)
    s[np.isinf(others)] = 0.0
    s[np.isinf(e[i])] = np.inf
    return s


def heard_field(net: Network, points: np.ndarray) -> np.ndarray:
    """(m,) index of the heard station at each point, -1 where silent."""
    s = sinr_matrix(net, points)
    heard = s >= net.beta
    if net.overlapping_zones:
        masked = np.where(heard, s, -np.inf)
        best = np.argmax(masked, axis=0)
    else:
        best = np.argmax(heard, axis=0)
    return np.where(heard.any(axis=0), best, -1)


def weighted_voronoi_field(net: Network, points: np.ndarray) -> np.ndarray:
    """(m,) weighted Voronoi owner of each point."""
    d = distance_matrix(net, points)
    weights = powers(net) ** (1.0 / net.alpha)
    with np.errstate(divide="ignore"):
        score = weights[:, None] / d
    return np.argmax(score, axis=0)


def sinr_envelope(
    net: Network,
    i: int,
    centres: np.ndarray,
    radii: np.ndarray,
    sinr_values: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Lower and upper bounds on SINR(s_i, .) over closed balls B(c, r).

    Every station sits at distance d >= dmin from c, so each energy moves by at
    most a factor ((1 -+ eta))^-alpha with eta = r / dmin; noise is constant.
    Balls that reach a station get the trivial bounds [0, inf].
    """
    c = np.asarray(centres, dtype=float).reshape(-1, net.dim)
    r = np.broadcast_to(np.asarray(radii, dtype=float), (c.shape[0],))
    s = sinr_field(net, i, c) if sinr_values is None else sinr_values
    dmin = distance_matrix(net, c).min(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = r / dmin
        valid = eta < 1.0
        ratio = np.where(valid, (1.0 - eta) / (1.0 + eta), 0.0)
        lower = np.where(valid, s * ratio**net.alpha, 0.0)
        upper = np.where(valid, s / np.where(valid, ratio, 1.0) ** net.alpha, np.inf)
    return lower, upper


def max_sinr_envelope(
    net: Network, centres: np.ndarray, radii: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-ball bounds on max_k SINR(s_k, .), used for the silent zone."""
    c = np.asarray(centres, dtype=float).reshape(-1, net.dim)
    s = sinr_matrix(net, c)
    lows, highs = [], []
    for k in range(net.n):
        lo, hi = sinr_envelope(net, k, c, radii, sinr_values=s[k])
        lows.append(lo)
        highs.append(hi)
    return np.max(lows, axis=0), np.max(highs, axis=0)

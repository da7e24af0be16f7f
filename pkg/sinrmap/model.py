"""
Network loading, validation and similarity transforms.
"""
import logging
from pathlib import Path

import numpy as np

from sinrmap.schemas import Network, SimilarityTransform, Station

logger = logging.getLogger(__name__)

# Tolerance for R^T R = I
ORTHOGONALITY_TOL = 1e-12


def validate_network(net: Network) -> Network:
    """
    Checks the assumptions every other module relies on.
    Returns the network unchanged when all hold.
    Raises ValueError naming the first violated condition.
    """
    if net.dim < 1:
        raise ValueError(f"dimension must be positive, got {net.dim}")
    if net.n < 2:
        raise ValueError(f"n ≥ 2 required, got {net.n} station(s)")
    if not net.alpha > 0:
        raise ValueError(f"alpha must be positive, got {net.alpha}")
    if not net.beta > 0:
        raise ValueError(f"beta must be positive, got {net.beta}")
    if net.noise < 0:
        raise ValueError(f"noise must be non-negative, got {net.noise}")

    for station in net.stations:
        if len(station.pos) != net.dim:
            raise ValueError(
                f'Station "{station.id}" has {len(station.pos)} coordinate(s), '
                f"network dimension is {net.dim}"
            )
        if not station.power > 0:
            raise ValueError(f'Station "{station.id}": power must be positive, got {station.power}')

    seen: dict[tuple[float, ...], Station] = {}
    for station in net.stations:
        other = seen.get(station.pos)
        if other is not None and other.power != station.power:
            raise ValueError(
                f'Stations "{other.id}" and "{station.id}" share position {station.pos} '
                f"with different powers"
            )
        seen.setdefault(station.pos, station)

    ids = [station.id for station in net.stations]
    if len(set(ids)) != len(ids):
        raise ValueError("station ids must be unique")

    if net.overlapping_zones:
        logger.warning("beta=%s < 1: reception zones may overlap", net.beta)
    return net


def load_network(path: str | Path) -> Network:
    """
    Reads a network JSON file and validates it.
    Raises ValueError (pydantic.ValidationError included) on malformed content.
    """
    text = Path(path).read_text(encoding="utf-8")
    return validate_network(Network.model_validate_json(text))


def dump_network(net: Network) -> str:
    """Serialises a network to the documented JSON layout."""
    return net.model_dump_json(indent=2)


def station_index(net: Network, key: str | int) -> int:
    """
    Resolves a station by id, falling back to a 0-based index.
    Raises ValueError if nothing matches.
    """
    for index, station in enumerate(net.stations):
        if station.id == str(key):
            return index
    try:
        index = int(key)
    except (TypeError, ValueError):
        raise ValueError(f'No station with id "{key}"') from None
    if not 0 <= index < net.n:
        raise ValueError(f"station index {index} out of range for {net.n} stations")
    return index


def positions(net: Network) -> np.ndarray:
    """(n, d) array of station positions."""
    return np.array([s.pos for s in net.stations], dtype=float)


def powers(net: Network) -> np.ndarray:
    """(n,) array of station powers."""
    return np.array([s.power for s in net.stations], dtype=float)


def even_alpha(net: Network) -> int:
    """
    Returns alpha as an int when it is a positive even integer.
    Raises ValueError otherwise (exact polynomial work needs dist^alpha polynomial).
    """
    alpha = net.alpha
    if not (float(alpha).is_integer() and alpha > 0 and int(alpha) % 2 == 0):
        raise ValueError(f"alpha must be a positive even integer for exact computation, got {alpha}")
    return int(alpha)


def is_collinear(net: Network, tol: float = 1e-12) -> bool:
    """True when all station positions lie on one line."""
    pts = positions(net)
    diffs = pts[1:] - pts[0]
    if diffs.size == 0:
        return True
    scale = max(1.0, float(np.abs(pts).max()))
    return int(np.linalg.matrix_rank(diffs, tol=tol * scale)) <= 1


def min_station_distance(net: Network, i: int) -> float:
    """
    Minimum distance from station i to any other station.
    Raises ValueError when i is out of range.
    """
    if not 0 <= i < net.n:
        raise ValueError(f"station index {i} out of range for {net.n} stations")
    pts = positions(net)
    d = np.linalg.norm(np.delete(pts, i, axis=0) - pts[i], axis=1)
    return float(d.min())


# ============================================================================
# Similarity transforms
# ============================================================================


def _rotation_matrix(f: SimilarityTransform, dim: int) -> np.ndarray:
    rot = np.array(f.rotation, dtype=float)
    if rot.shape != (dim, dim):
        raise ValueError(f"rotation must be {dim}x{dim}, got shape {rot.shape}")
    if not np.allclose(rot.T @ rot, np.eye(dim), rtol=0.0, atol=ORTHOGONALITY_TOL):
        raise ValueError("rotation matrix is not orthogonal")
    return rot


def apply_transform(f: SimilarityTransform, points: np.ndarray) -> np.ndarray:
    """Maps an (m, d) array (or a single point) through f."""
    pts = np.asarray(points, dtype=float)
    rot = _rotation_matrix(f, pts.shape[-1])
    return f.scale * pts @ rot.T + np.asarray(f.translation, dtype=float)


def transform_network(net: Network, f: SimilarityTransform) -> Network:
    """
    Maps every station through f and rescales noise to N / scale^alpha,
    which keeps SINR(s_i, p) == SINR(f(s_i), f(p)) for every alpha.
    Raises ValueError for a non-orthogonal rotation.
    """
    if len(f.translation) != net.dim:
        raise ValueError(f"translation must have {net.dim} coordinate(s)")
    mapped = apply_transform(f, positions(net))
    stations = tuple(
        Station(id=s.id, pos=tuple(float(c) for c in row), power=s.power)
        for s, row in zip(net.stations, mapped)
    )
    return net.model_copy(
        update={"stations": stations, "noise": net.noise / f.scale**net.alpha}
    )


def inverse_transform(f: SimilarityTransform) -> SimilarityTransform:
    """Returns g with g(f(x)) == x."""
    rot = np.array(f.rotation, dtype=float)
    inv_rot = rot.T
    translation = -(inv_rot @ np.asarray(f.translation, dtype=float)) / f.scale
    return SimilarityTransform(
        rotation=tuple(tuple(float(v) for v in row) for row in inv_rot),
        translation=tuple(float(v) for v in translation),
        scale=1.0 / f.scale,
    )


def identity_transform(dim: int) -> SimilarityTransform:
    """The identity similarity in dimension dim."""
    eye = np.eye(dim)
    return SimilarityTransform(
        rotation=tuple(tuple(float(v) for v in row) for row in eye),
        translation=(0.0,) * dim,
        scale=1.0,
    )

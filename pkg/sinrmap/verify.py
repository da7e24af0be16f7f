"""
Seeded verification suites. Every trial draws its instance from
numpy's PCG64 generator seeded with SeedSequence([seed, trial]), so a
(seed, trial) pair always reproduces the same network.
"""
import logging
import math
from typing import Callable

import numpy as np

from sinrmap.config import settings
from sinrmap.diagram1d import count_cells_1d, nfh_check_1d
from sinrmap.geometry import (
    construct_omega_n,
    discrete_wire_interference,
    embed_network,
    hyperbolic_reception_check,
    max_principle_check,
    wire_interference,
)
from sinrmap.model import apply_transform, positions, powers, transform_network, validate_network
from sinrmap.pointloc import QDS, Scheme, fatness_bounds, grid_spacing, qds_build, snap_epsilon
from sinrmap.schemas import Network, SimilarityTransform, Station, VerificationReport, Wire
from sinrmap.sinr_core import (
    distance_matrix,
    heard_field,
    sinr_field,
    sinr_matrix,
    weighted_voronoi_field,
)

logger = logging.getLogger(__name__)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator for one trial of a suite."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def instance_seed(seed: int, trial: int) -> int:
    """64-bit value identifying a (seed, trial) instance in reports."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, dtype=np.uint64)[0])


# ============================================================================
# Random instances
# ============================================================================


def random_line_network(rng: np.random.Generator) -> Network:
    """n in [2, 10], alpha 2, beta in [1, 3], powers in [1, 10], N in {0, 0.1}; dyadic values."""
    n = int(rng.integers(2, 11))
    xs = rng.choice(np.arange(-640, 641), size=n, replace=False) / 64
    stations = tuple(
        Station(id=f"s{k}", pos=(float(x),), power=float(rng.integers(4, 41)) / 4)
        for k, x in enumerate(xs)
    )
    return validate_network(
        Network(
            dim=1,
            alpha=2.0,
            beta=float(rng.integers(16, 49)) / 16,
            noise=float(rng.choice([0.0, 0.1])),
            stations=stations,
        )
    )


def random_plane_network(
    rng: np.random.Generator,
    n: int,
    dim: int = 2,
    alpha: float = 2.0,
    power_range: tuple[float, float] = (1.0, 4.0),
    noise_range: tuple[float, float] = (0.01, 0.5),
    beta_range: tuple[float, float] = (1.0, 3.0),
    spread: float = 5.0,
    separation: float = 0.5,
) -> Network:
    """Stations in [-spread, spread]^dim at least `separation` apart."""
    pts: list[np.ndarray] = []
    while len(pts) < n:
        p = rng.uniform(-spread, spread, size=dim)
        if all(np.linalg.norm(p - q) >= separation for q in pts):
            pts.append(p)
    stations = tuple(
        Station(id=f"s{k}", pos=tuple(float(v) for v in p), power=float(rng.uniform(*power_range)))
        for k, p in enumerate(pts)
    )
    return validate_network(
        Network(
            dim=dim,
            alpha=alpha,
            beta=float(rng.uniform(*beta_range)),
            noise=float(rng.uniform(*noise_range)),
            stations=stations,
        )
    )


def random_similarity(rng: np.random.Generator, dim: int) -> SimilarityTransform:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    return SimilarityTransform(
        rotation=tuple(tuple(float(v) for v in row) for row in q),
        translation=tuple(float(v) for v in rng.uniform(-10, 10, size=dim)),
        scale=float(rng.uniform(0.5, 2.0)),
    )


# ============================================================================
# Suites
# ============================================================================


def suite_nfh1d(seed: int, trials: int) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        net = random_line_network(trial_rng(seed, trial))
        tag = instance_seed(seed, trial)
        failures = [r for r in (nfh_check_1d(net, i, tag) for i in range(net.n)) if not r.passed]
        out.append(failures[0] if failures else VerificationReport(check="nfh1d", instance_seed=tag, passed=True))
    return out


def suite_bound2n1(seed: int, trials: int) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        net = random_line_network(trial_rng(seed, trial))
        counts = count_cells_1d(net)
        passed = counts.within_bound and counts.weakest_cells == 1
        out.append(
            VerificationReport(
                check="bound2n1",
                instance_seed=instance_seed(seed, trial),
                passed=passed,
                witness=None if passed else counts.model_dump(),
            )
        )
    return out


def _free_disk(rng: np.random.Generator, net: Network, exclude: int) -> tuple[np.ndarray, float]:
    pts = np.delete(positions(net), exclude, axis=0)
    while True:
        centre = rng.uniform(-6, 6, size=2)
        gap = float(np.linalg.norm(pts - centre, axis=1).min())
        if gap > 0.05:
            return centre, float(rng.uniform(0.02, 0.95)) * gap


def suite_maxprinciple(seed: int, trials: int, disks: int = 5) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        net = random_plane_network(rng, 5)
        tag = instance_seed(seed, trial)
        report = VerificationReport(check="maxprinciple", instance_seed=tag, passed=True)
        for _ in range(disks):
            exclude = int(rng.integers(net.n))
            centre, radius = _free_disk(rng, net, exclude)
            result = max_principle_check(net, exclude, centre, radius, instance_seed=tag)
            if not result.passed:
                report = result
                break
        out.append(report)
    return out


def _reception_points(rng: np.random.Generator, net: Network, i: int, count: int) -> np.ndarray:
    """Heard points of s_i in the upper half-space of an embedded network."""
    reach = fatness_bounds(net, i).delta_hat
    base = np.asarray(net.stations[i].pos)
    found: list[np.ndarray] = []
    for _ in range(50):
        cand = base + rng.uniform(-reach, reach, size=(4 * count, net.dim))
        cand[:, -1] = np.abs(cand[:, -1])
        keep = cand[sinr_field(net, i, cand) >= net.beta * (1 + 1e-9)]
        found.extend(keep)
        if len(found) >= count:
            break
    return np.array(found[:count])


def suite_hyperbolic(seed: int, trials: int, pairs: int = 100) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        dim = 1 + trial % 2
        net = embed_network(random_plane_network(rng, int(rng.integers(2, 6)), dim=dim))
        tag = instance_seed(seed, trial)
        report = VerificationReport(check="hyperbolic", instance_seed=tag, passed=True)
        i = int(rng.integers(net.n))
        points = _reception_points(rng, net, i, 2 * pairs)
        station = np.asarray(net.stations[i].pos)
        endpoints = [(station, points[0])] if len(points) else []
        endpoints += [(points[k], points[k + 1]) for k in range(0, len(points) - 1, 2)]
        for p1, p2 in endpoints[:pairs]:
            result = hyperbolic_reception_check(net, i, p1, p2, instance_seed=tag)
            if not result.passed:
                report = result
                break
        out.append(report)
    out.append(_disconnected_hyperbolic())
    return out


def _disconnected_hyperbolic() -> VerificationReport:
    """s_0 of the n=2 extreme construction has three planar cells; join two of them."""
    net, report = construct_omega_n(2)
    lifted = embed_network(net)
    far = (float(report.radius), 0.0, 0.0)
    result = hyperbolic_reception_check(lifted, 0, (0.0, 0.0, 0.0), far)
    return result.model_copy(update={"detail": "disconnected planar zone (extreme construction, n=2)"})


def _voronoi_violations(net: Network, points: np.ndarray, weighted: bool) -> np.ndarray:
    heard = heard_field(net, points)
    d = distance_matrix(net, points)
    if weighted:
        owner = weighted_voronoi_field(net, points)
        w = powers(net) ** (1.0 / net.alpha)
        score = w[:, None] / d
        top = np.sort(score, axis=0)
        tie = top[-1] - top[-2] <= 1e-9 * top[-1]
        return (heard >= 0) & (owner != heard) & ~tie
    # at finite alpha the unweighted containment holds up to (max/min power)^(1/alpha)
    slack = (powers(net).max() / powers(net).min()) ** (1.0 / net.alpha)
    cols = np.arange(points.shape[0])
    own = d[np.maximum(heard, 0), cols]
    nearest = d.min(axis=0)
    return (heard >= 0) & (own > nearest * slack * (1 + 1e-12))


def suite_voronoi(seed: int, trials: int, samples: int = 10_000) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        tag = instance_seed(seed, trial)
        for alpha, weighted in ((2.0, True), (64.0, False)):
            net = random_plane_network(rng, int(rng.integers(2, 7)), alpha=alpha)
            pts = rng.uniform(-7, 7, size=(samples, 2))
            pts = pts[distance_matrix(net, pts).min(axis=0) > 1e-3]
            bad = np.flatnonzero(_voronoi_violations(net, pts, weighted))
            out.append(
                VerificationReport(
                    check="voronoi",
                    instance_seed=tag,
                    passed=bad.size == 0,
                    witness=None if bad.size == 0 else {"point": pts[bad[0]].tolist(), "alpha": alpha},
                    detail="weighted" if weighted else "unweighted, alpha=64",
                )
            )
    return out


def suite_transform(seed: int, trials: int, points: int = 50) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        dim = int(rng.integers(1, 4))
        net = random_plane_network(rng, int(rng.integers(2, 7)), dim=dim, alpha=float(rng.choice([2.0, 3.0, 4.0])))
        f = random_similarity(rng, dim)
        moved = transform_network(net, f)
        pts = rng.uniform(-6, 6, size=(points, dim))
        pts = pts[distance_matrix(net, pts).min(axis=0) > 0.1]
        mapped = apply_transform(f, pts)
        before = sinr_matrix(net, pts)
        after = sinr_matrix(moved, mapped)
        rel = np.abs(before - after) / before
        worst = np.unravel_index(np.argmax(rel), rel.shape) if rel.size else None
        passed = bool(rel.size == 0 or rel.max() <= 1e-12)
        out.append(
            VerificationReport(
                check="transform",
                instance_seed=instance_seed(seed, trial),
                passed=passed,
                witness=None if passed else {
                    "station": int(worst[0]),
                    "point": pts[worst[1]].tolist(),
                    "relative_error": float(rel.max()),
                },
            )
        )
    return out


def suite_wireconv(seed: int, trials: int, chi: int = 100_000) -> list[VerificationReport]:
    """Deterministic: the ratios are fixed, seed and trials are not used."""
    out = []
    wire = Wire(center=(0.0, 0.0), radius=1.0, power=1.0)
    for ratio in (0.25, 0.5, 2.0, 4.0):
        # off-axis so the point never lines up with a wire station
        k = (ratio * math.cos(0.3), ratio * math.sin(0.3))
        exact = wire_interference(wire, k)
        approx = discrete_wire_interference(wire, chi, k)
        rel = abs(approx - exact) / exact
        out.append(
            VerificationReport(
                check="wireconv",
                passed=rel < 1e-4,
                witness=None if rel < 1e-4 else {"ratio": ratio, "relative_error": rel},
                detail=f"d/r={ratio}",
            )
        )
    return out


def tagcell_soundness(net: Network, qds: QDS, rng: np.random.Generator, per_cell: int = 100) -> dict | None:
    """
    Samples points inside every plus and question cell, and inside minus cells
    that reach B(s_i, delta_hat); returns the first counterexample or None.
    """
    eps = qds.epsilon
    a = net.alpha
    low, high = (1 - eps) ** (2 * a) * net.beta, (1 + eps) ** (2 * a) * net.beta
    reach = fatness_bounds(net, qds.station).delta_hat + 2 * qds.gamma
    station = np.asarray(net.stations[qds.station].pos)
    iy, ix = np.nonzero(np.ones_like(qds.tags, dtype=bool))
    corners = np.asarray(qds.origin) + qds.gamma * np.stack([ix, iy], axis=1)
    near = np.linalg.norm(corners + qds.gamma / 2 - station, axis=1) <= reach
    ix, iy, corners = ix[near], iy[near], corners[near]
    tags = qds.tags[iy, ix]
    for start in range(0, tags.size, 2000):
        block = slice(start, start + 2000)
        c, t = corners[block], tags[block]
        pts = c[:, None, :] + rng.uniform(0.0, qds.gamma, size=(c.shape[0], per_cell, 2))
        s = sinr_field(net, qds.station, pts.reshape(-1, 2)).reshape(c.shape[0], per_cell)
        on_station = distance_matrix(net, pts.reshape(-1, 2)).min(axis=0).reshape(s.shape) == 0
        bad = np.zeros_like(s, dtype=bool)
        bad |= (t == 1)[:, None] & (s < net.beta)
        bad |= (t == 0)[:, None] & (s >= net.beta)
        bad |= (t == 2)[:, None] & ((s < low) | (s > high))
        bad &= ~on_station
        hit = np.argwhere(bad)
        if hit.size:
            k, j = hit[0]
            return {"cell": [int(ix[start + k]), int(iy[start + k])], "tag": int(t[k]),
                    "point": pts[k, j].tolist(), "sinr": float(s[k, j])}
    return None


TAGCELL_MAX_SIDE = 512
TAGCELL_ATTEMPTS = 1000


def tagcell_instance(rng: np.random.Generator) -> tuple[Network, int, float]:
    """
    Draws (network, station, epsilon) with 2..6 stations, noise in [0.1, 1] and
    unit separation, redrawing while the Scheme C grid side exceeds TAGCELL_MAX_SIDE.
    """
    for _ in range(TAGCELL_ATTEMPTS):
        net = random_plane_network(
            rng, int(rng.integers(2, 7)), power_range=(1.0, 2.0), noise_range=(0.1, 1.0),
            beta_range=(1.0, 2.0), spread=2.5, separation=1.0,
        )
        eps = float(rng.choice([0.05, 0.1]))
        i = int(rng.integers(net.n))
        fb = fatness_bounds(net, i)
        gamma = grid_spacing(Scheme.C, float(snap_epsilon(eps)), fb, net.n, fb.phi_hat)
        if 2 * math.ceil(fb.delta_hat / float(gamma)) <= TAGCELL_MAX_SIDE:
            return net, i, eps
    raise ValueError(f"no tagcell instance with grid side <= {TAGCELL_MAX_SIDE} in {TAGCELL_ATTEMPTS} draws")


def suite_tagcell(seed: int, trials: int) -> list[VerificationReport]:
    out = []
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        net, i, eps = tagcell_instance(rng)
        qds = qds_build(net, i, Scheme.C, eps)
        witness = tagcell_soundness(net, qds, rng)
        out.append(
            VerificationReport(
                check="tagcell",
                instance_seed=instance_seed(seed, trial),
                passed=witness is None,
                witness=witness,
                detail=f"epsilon={qds.epsilon}, cells={qds.extent[0]}x{qds.extent[1]}",
            )
        )
    return out


SUITES: dict[str, Callable[[int, int], list[VerificationReport]]] = {
    "nfh1d": suite_nfh1d,
    "bound2n1": suite_bound2n1,
    "maxprinciple": suite_maxprinciple,
    "hyperbolic": suite_hyperbolic,
    "voronoi": suite_voronoi,
    "transform": suite_transform,
    "wireconv": suite_wireconv,
    "tagcell": suite_tagcell,
}


def run_suite(name: str, trials: int | None = None, seed: int | None = None) -> list[VerificationReport]:
    """
    Runs one named suite.
    Raises ValueError for an unknown suite name or a non-positive trial count.
    """
    if name not in SUITES:
        raise ValueError(f'unknown suite "{name}"; choose from {", ".join(SUITES)}')
    trials = settings.default_trials if trials is None else trials
    seed = settings.default_seed if seed is None else seed
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    reports = SUITES[name](seed, trials)
    failed = sum(not r.passed for r in reports)
    logger.info("suite %s: %d report(s), %d failed", name, len(reports), failed)
    return reports

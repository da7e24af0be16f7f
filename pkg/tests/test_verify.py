"""
Tests for the seeded verification suites.
"""
import json
import math

import numpy as np
import pytest

from sinrmap.pointloc import Scheme, fatness_bounds, grid_spacing, snap_epsilon
from sinrmap.verify import (
    SUITES,
    TAGCELL_MAX_SIDE,
    instance_seed,
    random_line_network,
    random_plane_network,
    run_suite,
    tagcell_instance,
    trial_rng,
)


def test_trial_rng_is_reproducible():
    a = trial_rng(7, 3).uniform(size=5)
    b = trial_rng(7, 3).uniform(size=5)
    c = trial_rng(7, 4).uniform(size=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_instance_seed_is_stable():
    assert instance_seed(7, 0) == instance_seed(7, 0)
    assert instance_seed(7, 0) != instance_seed(7, 1)
    assert 0 <= instance_seed(7, 0) < 2**64


def test_random_line_network_ranges():
    for trial in range(20):
        net = random_line_network(trial_rng(1, trial))
        assert net.dim == 1
        assert 2 <= net.n <= 10
        assert 1.0 <= net.beta <= 3.0
        assert net.noise in (0.0, 0.1)
        assert all(1.0 <= s.power <= 10.0 for s in net.stations)


def test_random_plane_network_separation():
    net = random_plane_network(trial_rng(2, 0), 5, separation=1.0)
    pts = np.array([s.pos for s in net.stations])
    gaps = np.linalg.norm(pts[:, None] - pts[None, :], axis=2) + np.eye(5) * 10
    assert gaps.min() >= 1.0


def test_tagcell_instances_cover_the_wide_range():
    sizes = set()
    for trial in range(40):
        net, i, eps = tagcell_instance(trial_rng(5, trial))
        sizes.add(net.n)
        assert 2 <= net.n <= 6
        assert 0.1 <= net.noise <= 1.0
        assert 0 <= i < net.n
        assert eps in (0.05, 0.1)
        fb = fatness_bounds(net, i)
        gamma = float(grid_spacing(Scheme.C, float(snap_epsilon(eps)), fb, net.n, fb.phi_hat))
        assert 2 * math.ceil(fb.delta_hat / gamma) <= TAGCELL_MAX_SIDE
    assert len(sizes) >= 3


def test_run_suite_unknown_name():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("nope")


def test_run_suite_rejects_zero_trials():
    with pytest.raises(ValueError, match="trials"):
        run_suite("nfh1d", trials=0)


@pytest.mark.parametrize(
    "name, trials",
    [
        ("nfh1d", 5),
        ("bound2n1", 5),
        ("maxprinciple", 2),
        ("hyperbolic", 2),
        ("voronoi", 2),
        ("transform", 3),
        ("wireconv", 2),
        ("tagcell", 1),
    ],
)
def test_suites_pass(name, trials):
    reports = run_suite(name, trials=trials, seed=7)
    assert reports
    failures = [r.to_json() for r in reports if not r.passed]
    assert failures == []


def test_suite_reports_serialise_with_pass_key():
    reports = run_suite("nfh1d", trials=2, seed=3)
    for report in reports:
        data = json.loads(report.to_json())
        assert data["check"] == "nfh1d"
        assert data["pass"] is True
        assert "passed" not in data


def test_suites_are_deterministic():
    first = [r.to_json() for r in run_suite("bound2n1", trials=3, seed=11)]
    second = [r.to_json() for r in run_suite("bound2n1", trials=3, seed=11)]
    assert first == second


def test_every_suite_is_registered():
    assert set(SUITES) == {
        "nfh1d", "bound2n1", "maxprinciple", "hyperbolic",
        "voronoi", "transform", "wireconv", "tagcell",
    }


@pytest.mark.slow
@pytest.mark.parametrize("name, trials", [("nfh1d", 200), ("tagcell", 6)])
def test_suites_pass_at_scale(name, trials):
    reports = run_suite(name, trials=trials, seed=7)
    assert len(reports) >= trials
    failures = [r.to_json() for r in reports if not r.passed]
    assert failures == []

"""
Tests for exact 1D reception intervals and cell counts.
"""
import math
from fractions import Fraction

import pytest

from sinrmap.diagram1d import (
    Interval,
    IntervalSet,
    count_cells_1d,
    find_station_free_gap,
    nfh_check_1d,
    reception_intervals,
)
from sinrmap.sinr_core import is_heard
from tests.factories import make_network


def test_equal_pair_splits_at_midpoint():
    net = make_network([((0.0,), 1.0), ((4.0,), 1.0)], dim=1)
    [left] = reception_intervals(net, 0).to_json_list()
    assert left == {"lo": "-inf", "hi": pytest.approx(2.0, rel=1e-15), "lo_closed": False, "hi_closed": True}
    [right] = reception_intervals(net, 1).to_json_list()
    assert right == {"lo": pytest.approx(2.0, rel=1e-15), "hi": "inf", "lo_closed": True, "hi_closed": False}


def test_strong_station_gets_two_cells(line_network):
    """F = -9x^2 + 20x - 10 for s0: heard outside the roots (10 -+ sqrt 10) / 9."""
    zone = reception_intervals(line_network, 0)
    assert len(zone) == 2
    left, right = zone.intervals
    assert left.lo is None and right.hi is None
    assert float(left.hi) == pytest.approx((10 - math.sqrt(10)) / 9, rel=1e-14)
    assert float(right.lo) == pytest.approx((10 + math.sqrt(10)) / 9, rel=1e-14)
    assert zone.contains(0.0) and zone.contains(5.0)
    assert not zone.contains(1.0)


def test_weak_station_gets_one_bounded_cell(line_network):
    zone = reception_intervals(line_network, 1)
    assert len(zone) == 1
    assert zone.intervals[0].bounded
    assert zone.contains(1.0)


def test_noise_bounds_every_zone():
    net = make_network([((0.0,), 1.0), ((4.0,), 1.0)], dim=1, noise=1.0)
    zone = reception_intervals(net, 0)
    assert len(zone) == 1
    cell = zone.intervals[0]
    assert cell.bounded and cell.lo_closed and cell.hi_closed
    assert zone.contains(-0.5) and zone.contains(0.5)
    assert not zone.contains(2.0)


def test_intervals_agree_with_sampling():
    net = make_network(
        [((-3.0,), 2.0), ((0.0,), 1.0), ((1.5,), 5.0), ((6.0,), 1.0)], dim=1, beta=1.5, noise=0.05
    )
    for i in range(net.n):
        zone = reception_intervals(net, i)
        for k in range(-80, 161):
            x = k / 16 + 1 / 64
            assert zone.contains(x) == is_heard(net, i, (x,)), (i, x)


def test_endpoints_are_closed_and_heard(line_network):
    """SINR == beta at an endpoint, which counts as heard."""
    zone = reception_intervals(line_network, 1)
    cell = zone.intervals[0]
    assert cell.contains(cell.lo) and cell.contains(cell.hi)


def test_reception_intervals_validation(pair_network):
    with pytest.raises(ValueError, match="dim=1"):
        reception_intervals(pair_network, 0)
    low_beta = make_network([((0.0,), 1.0), ((1.0,), 1.0)], dim=1, beta=0.5)
    with pytest.raises(ValueError, match="beta"):
        reception_intervals(low_beta, 0)
    odd = make_network([((0.0,), 1.0), ((1.0,), 1.0)], dim=1, alpha=3.0)
    with pytest.raises(ValueError, match="even"):
        reception_intervals(odd, 0)
    net = make_network([((0.0,), 1.0), ((1.0,), 1.0)], dim=1)
    with pytest.raises(ValueError, match="out of range"):
        reception_intervals(net, 2)


def test_count_cells_1d(line_network):
    report = count_cells_1d(line_network)
    assert report.per_station == [2, 1]
    assert report.total == 3
    assert report.bound == 3
    assert report.within_bound
    assert report.weakest == 1
    assert report.weakest_cells == 1


def test_weakest_station_has_one_cell():
    net = make_network(
        [((0.0,), 3.0), ((2.0,), 1.0), ((2.5,), 8.0), ((7.0,), 2.0)], dim=1, beta=1.25
    )
    report = count_cells_1d(net)
    assert report.weakest_cells == 1
    assert report.total <= report.bound


def test_interval_json_sentinels():
    interval = Interval(lo=None, hi=Fraction(1, 2), lo_closed=True, hi_closed=True)
    assert interval.to_dict() == {"lo": "-inf", "hi": 0.5, "lo_closed": False, "hi_closed": True}


def test_find_station_free_gap():
    zone = IntervalSet(intervals=(
        Interval(lo=None, hi=Fraction(1)),
        Interval(lo=Fraction(2), hi=None),
    ))
    assert find_station_free_gap(zone, [1.5]) is None
    assert find_station_free_gap(zone, [0.0, 3.0]) == zone.intervals


def test_find_station_free_gap_counts_punctures():
    """A station on an open endpoint sits in the gap."""
    zone = IntervalSet(intervals=(
        Interval(lo=Fraction(0), hi=Fraction(1), hi_closed=False),
        Interval(lo=Fraction(1), hi=Fraction(2), lo_closed=False),
    ))
    assert find_station_free_gap(zone, [1.0]) is None


def test_nfh_check_1d(line_network):
    report = nfh_check_1d(line_network, 0, instance_seed=11)
    assert report.passed
    assert report.instance_seed == 11
    assert report.to_json() == '{"check":"nfh1d","instance_seed":11,"pass":true}'

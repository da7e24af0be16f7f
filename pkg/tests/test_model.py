"""
Tests for network parsing, validation and similarity transforms.
"""
import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from sinrmap.model import (
    apply_transform,
    even_alpha,
    identity_transform,
    inverse_transform,
    is_collinear,
    load_network,
    min_station_distance,
    station_index,
    transform_network,
    validate_network,
)
from sinrmap.schemas import Network, SimilarityTransform, parse_point
from sinrmap.sinr_core import sinr
from tests.factories import make_network


def test_load_network_accepts_string_positions(tmp_path):
    """Positions may be given as "x,y" strings or lists."""
    path = tmp_path / "net.json"
    path.write_text(json.dumps({
        "dim": 2, "alpha": 2, "beta": 1.5, "noise": 0.1,
        "stations": [
            {"id": "a", "pos": "0,0", "power": 1},
            {"id": "b", "pos": [3, 4], "power": 2},
        ],
    }))
    net = load_network(path)
    assert net.n == 2
    assert net.stations[0].pos == (0.0, 0.0)
    assert net.stations[1].pos == (3.0, 4.0)


def test_load_network_rejects_malformed_json(tmp_path):
    """pydantic errors surface as ValueError."""
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2, "alpha": 2}')
    with pytest.raises(ValueError):
        load_network(path)


def test_load_network_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_network(tmp_path / "missing.json")


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"beta": 0.0}, "beta"),
        ({"noise": -1.0}, "noise"),
        ({"alpha": -2.0}, "alpha"),
    ],
)
def test_validate_network_rejects_bad_parameters(kwargs, message):
    net = make_network([((0.0, 0.0), 1.0), ((1.0, 0.0), 1.0)], **kwargs)
    with pytest.raises(ValueError, match=message):
        validate_network(net)


def test_validate_network_needs_two_stations():
    net = make_network([((0.0, 0.0), 1.0)])
    with pytest.raises(ValueError, match="n ≥ 2"):
        validate_network(net)


def test_validate_network_rejects_wrong_dimension():
    net = make_network([((0.0, 0.0), 1.0), ((1.0,), 1.0)])
    with pytest.raises(ValueError, match="coordinate"):
        validate_network(net)


def test_validate_network_rejects_shared_position_with_different_power():
    net = make_network([((1.0, 1.0), 1.0), ((1.0, 1.0), 2.0)])
    with pytest.raises(ValueError, match="share position"):
        validate_network(net)


def test_validate_network_allows_shared_position_with_equal_power():
    net = make_network([((1.0, 1.0), 2.0), ((1.0, 1.0), 2.0), ((5.0, 0.0), 1.0)])
    assert validate_network(net) is net


def test_validate_network_warns_on_low_beta(caplog):
    """beta < 1 is allowed but logged, since zones may overlap."""
    net = make_network([((0.0, 0.0), 1.0), ((1.0, 0.0), 1.0)], beta=0.5)
    with caplog.at_level("WARNING", logger="sinrmap.model"):
        validate_network(net)
    assert "overlap" in caplog.text
    assert net.overlapping_zones


def test_network_is_frozen(pair_network):
    with pytest.raises(ValidationError):
        pair_network.beta = 2.0


def test_parse_point():
    assert parse_point("1, 2") == (1.0, 2.0)
    assert parse_point([0, 0, 3]) == (0.0, 0.0, 3.0)
    with pytest.raises(ValueError):
        parse_point("")
    with pytest.raises(ValueError):
        parse_point("1,inf")


def test_station_index_by_id_and_position(pair_network):
    assert station_index(pair_network, "s1") == 1
    assert station_index(pair_network, "0") == 0
    assert station_index(pair_network, 1) == 1
    with pytest.raises(ValueError):
        station_index(pair_network, "nope")
    with pytest.raises(ValueError):
        station_index(pair_network, 5)


def test_even_alpha():
    net = make_network([((0.0,), 1.0), ((1.0,), 1.0)], dim=1, alpha=4.0)
    assert even_alpha(net) == 4
    for alpha in (3.0, 2.5):
        odd = make_network([((0.0,), 1.0), ((1.0,), 1.0)], dim=1, alpha=alpha)
        with pytest.raises(ValueError, match="even"):
            even_alpha(odd)


def test_is_collinear(pair_network, triangle_network):
    assert is_collinear(pair_network)
    assert not is_collinear(triangle_network)


def test_min_station_distance(triangle_network):
    assert min_station_distance(triangle_network, 0) == pytest.approx(math.hypot(1.0, 2.5))
    with pytest.raises(ValueError):
        min_station_distance(triangle_network, 3)


def test_transform_preserves_sinr(triangle_network):
    """SINR(s_i, p) == SINR(f(s_i), f(p)) once noise is rescaled by scale^-alpha."""
    angle = 0.7
    f = SimilarityTransform(
        rotation=((math.cos(angle), -math.sin(angle)), (math.sin(angle), math.cos(angle))),
        translation=(2.0, -1.0),
        scale=1.7,
    )
    mapped = transform_network(triangle_network, f)
    for p in [(0.5, 0.5), (2.0, 1.0), (-1.0, 3.0)]:
        q = apply_transform(f, np.array(p))
        for i in range(triangle_network.n):
            assert sinr(mapped, i, q) == pytest.approx(sinr(triangle_network, i, p), rel=1e-12)


def test_inverse_transform_round_trips():
    f = SimilarityTransform(rotation=((0.0, -1.0), (1.0, 0.0)), translation=(1.0, 2.0), scale=3.0)
    g = inverse_transform(f)
    p = np.array([[0.25, -4.0]])
    assert np.allclose(apply_transform(g, apply_transform(f, p)), p)


def test_transform_rejects_non_orthogonal_rotation(pair_network):
    f = SimilarityTransform(rotation=((1.0, 1.0), (0.0, 1.0)), translation=(0.0, 0.0), scale=1.0)
    with pytest.raises(ValueError, match="orthogonal"):
        transform_network(pair_network, f)


def test_identity_transform(pair_network):
    assert transform_network(pair_network, identity_transform(2)) == pair_network


def test_network_json_layout(pair_network):
    data = json.loads(pair_network.model_dump_json())
    assert set(data) == {"dim", "alpha", "beta", "noise", "stations"}
    assert data["stations"][0] == {"id": "s0", "pos": [0.0, 0.0], "power": 1.0}
    assert Network.model_validate(data) == pair_network

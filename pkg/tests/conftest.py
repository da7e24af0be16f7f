"""
Pytest configuration and shared network fixtures.
Networks are small so every exact computation stays fast.
"""
import pytest

from sinrmap.model import dump_network
from sinrmap.schemas import Network
from tests.factories import make_network


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running cases; deselect with -m \"not slow\"")


@pytest.fixture
def pair_network():
    """Two equal stations four apart, no noise: Z_0 is the halfplane x <= 2."""
    return make_network([((0.0, 0.0), 1.0), ((4.0, 0.0), 1.0)])


@pytest.fixture
def noisy_pair_network():
    """Two equal stations four apart with N = 1: both zones are bounded."""
    return make_network([((0.0, 0.0), 1.0), ((4.0, 0.0), 1.0)], noise=1.0)


@pytest.fixture
def line_network():
    """Strong station at 0, weak one at 1: s0 gets two cells, s1 one."""
    return make_network([((0.0,), 10.0), ((1.0,), 1.0)], dim=1)


@pytest.fixture
def triangle_network():
    """Three stations in general position with noise."""
    return make_network(
        [((0.0, 0.0), 2.0), ((3.0, 0.0), 1.0), ((1.0, 2.5), 1.5)], beta=1.5, noise=0.2
    )


@pytest.fixture
def network_file(tmp_path):
    """Writes a network to a temporary JSON file and returns its path."""
    def write(net: Network, name: str = "network.json"):
        path = tmp_path / name
        path.write_text(dump_network(net), encoding="utf-8")
        return path

    return write


@pytest.fixture(scope="session")
def omega2():
    """s0 plus two squares on the circle of radius 15: three cells of s0."""
    from sinrmap.geometry import construct_omega_n

    return construct_omega_n(2)

"""
Builders shared by the test modules.
"""
from sinrmap.schemas import Network, Station


def make_network(stations, dim=2, alpha=2.0, beta=1.0, noise=0.0) -> Network:
    """Builds a Network from (position, power) pairs; ids are s0, s1, ..."""
    return Network(
        dim=dim,
        alpha=alpha,
        beta=beta,
        noise=noise,
        stations=tuple(
            Station(id=f"s{k}", pos=tuple(pos), power=power)
            for k, (pos, power) in enumerate(stations)
        ),
    )

"""
sinrmap: SINR reception diagrams for wireless networks with non-uniform powers.
"""
from sinrmap.schemas import Network, Station

__all__ = ["Network", "Station"]

"""
Exact reception zones on the line.

The characteristic polynomial of station i is restricted to the x axis,
its real roots are isolated with Sturm sequences, and the sign between
consecutive roots decides membership. Roots themselves are reception
points (SINR == beta is heard).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from sinrmap.algebra import (
    eval_poly,
    isolate_all_roots,
    refine_root,
    restrict_characteristic,
    to_fraction,
)
from sinrmap.model import even_alpha
from sinrmap.schemas import CellCount1D, Network, VerificationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    """One maximal reception interval. None stands for -inf (lo) or +inf (hi)."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, x: Fraction | float) -> bool:
        x = to_fraction(x)
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def to_dict(self) -> dict:
        return {
            "lo": "-inf" if self.lo is None else float(self.lo),
            "hi": "inf" if self.hi is None else float(self.hi),
            "lo_closed": self.lo is not None and self.lo_closed,
            "hi_closed": self.hi is not None and self.hi_closed,
        }


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, disjoint, non-adjacent intervals."""

    intervals: tuple[Interval, ...] = ()

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def contains(self, x: Fraction | float) -> bool:
        return any(interval.contains(x) for interval in self.intervals)

    def to_json_list(self) -> list[dict]:
        return [interval.to_dict() for interval in self.intervals]


def _check_line_network(net: Network) -> None:
    if net.dim != 1:
        raise ValueError(f"1D diagrams need dim=1, got dim={net.dim}")
    even_alpha(net)
    if net.overlapping_zones:
        raise ValueError(f"1D diagrams assume beta >= 1, got {net.beta}")


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def reception_intervals(net: Network, i: int) -> IntervalSet:
    """
    Maximal intervals of Z_i on the real line, endpoints refined to
    2^-53 relative width. The station's own position is always inside.
    Raises ValueError if dim != 1, alpha is not a positive even integer, or beta < 1.
    """
    _check_line_network(net)
    if not 0 <= i < net.n:
        raise ValueError(f"station index {i} out of range for {net.n} stations")

    # p(t) = t, so F(t) is the characteristic polynomial in the x coordinate
    f = restrict_characteristic(net, i, (0,), (1,))
    if f.is_zero:
        raise ValueError(f"zone of station {net.stations[i].id} is degenerate (coincident stations)")

    brackets = [refine_root(f, interval) for interval in isolate_all_roots(f).intervals]
    roots = [lo if lo == hi else (lo + hi) / 2 for lo, hi in brackets]

    # sample points strictly inside every gap between roots
    if brackets:
        samples = [brackets[0][0] - 1]
        for (_, b_prev), (a_next, _) in zip(brackets, brackets[1:]):
            samples.append((b_prev + a_next) / 2)
        samples.append(brackets[-1][1] + 1)
    else:
        samples = [Fraction(0)]
    gap_member = [_sign(eval_poly(f, x)) < 0 for x in samples]

    intervals: list[Interval] = []
    start: Optional[Fraction] = None
    open_run = gap_member[0]
    for k, root in enumerate(roots):
        if not open_run:
            start = root
        if not gap_member[k + 1]:
            intervals.append(Interval(lo=start, hi=root))
            open_run = False
        else:
            open_run = True
    if open_run:
        intervals.append(Interval(lo=start, hi=None))

    zone = _puncture(net, i, intervals)
    logger.debug(
        "station %s: degree %d, %d root(s), %d interval(s)",
        net.stations[i].id, f.degree, len(roots), len(zone),
    )
    return zone


def _puncture(net: Network, i: int, intervals: list[Interval]) -> IntervalSet:
    """Removes interferer positions that fall inside an interval."""
    out = list(intervals)
    for j, station in enumerate(net.stations):
        if j == i or station.pos == net.stations[i].pos:
            continue
        x = to_fraction(station.pos[0])
        pieces = []
        for interval in out:
            if not interval.contains(x):
                pieces.append(interval)
                continue
            left = Interval(interval.lo, x, interval.lo_closed, False)
            right = Interval(x, interval.hi, False, interval.hi_closed)
            pieces.extend(piece for piece in (left, right) if piece.lo != piece.hi)
        out = pieces
    return IntervalSet(intervals=tuple(out))


def count_cells_1d(net: Network) -> CellCount1D:
    """
    Number of maximal intervals of every zone, their total, the 2n-1 bound
    and the cell count of the weakest station.
    """
    _check_line_network(net)
    per_station = [len(reception_intervals(net, i)) for i in range(net.n)]
    powers = [s.power for s in net.stations]
    weakest = powers.index(min(powers))
    report = CellCount1D(
        per_station=per_station,
        total=sum(per_station),
        bound=2 * net.n - 1,
        weakest=weakest,
        weakest_cells=per_station[weakest],
    )
    if not report.within_bound:
        logger.warning("1D cell total %d exceeds 2n-1=%d", report.total, report.bound)
    return report


def find_station_free_gap(
    zone: IntervalSet, station_xs: Sequence[float | Fraction]
) -> Optional[tuple[Interval, Interval]]:
    """
    First pair of consecutive cells whose gap holds no station, or None.
    A station on an open endpoint (a puncture) sits in the gap.
    """
    xs = [to_fraction(x) for x in station_xs]
    cells = zone.intervals
    for left, right in zip(cells, cells[1:]):
        hi, lo = left.hi, right.lo
        occupied = any(
            hi < x < lo
            or (x == hi and not left.hi_closed)
            or (x == lo and not right.lo_closed)
            for x in xs
        )
        if not occupied:
            return left, right
    return None


def nfh_check_1d(net: Network, i: int, instance_seed: Optional[int] = None) -> VerificationReport:
    """Every gap between consecutive cells of Z_i must contain a station."""
    zone = reception_intervals(net, i)
    gap = find_station_free_gap(zone, [s.pos[0] for s in net.stations])
    if gap is None:
        return VerificationReport(check="nfh1d", instance_seed=instance_seed, passed=True)
    left, right = gap
    return VerificationReport(
        check="nfh1d",
        instance_seed=instance_seed,
        passed=False,
        witness={"station": i, "gap": [float(left.hi), float(right.lo)]},
    )

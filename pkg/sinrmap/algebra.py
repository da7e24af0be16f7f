"""
Exact univariate polynomials over the rationals, Sturm root counting and
root isolation, and the characteristic polynomial restricted to a segment.

sympy's Poly over QQ does the arithmetic; coefficients are kept as
fractions.Fraction so callers never see sympy types.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from sympy import QQ, Poly, Rational, Symbol

from sinrmap.model import even_alpha
from sinrmap.schemas import Network

logger = logging.getLogger(__name__)

T = Symbol("t")

Number = Fraction | int | float


def to_fraction(value: Number) -> Fraction:
    """Exact conversion; binary64 floats become dyadic rationals."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def _to_sympy(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def _from_sympy(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def _poly_from_ascending(coeffs: Sequence[Fraction]) -> Poly:
    desc = [_to_sympy(c) for c in reversed(coeffs)] or [Rational(0)]
    return Poly.from_list(desc, T, domain=QQ)


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class RationalUniPoly:
    """Ascending rational coefficients with trailing zeros stripped; zero has none."""

    coeffs: tuple[Fraction, ...] = field(default=())

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Number]) -> "RationalUniPoly":
        values = [to_fraction(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        return cls(tuple(values))

    @classmethod
    def from_roots(cls, roots: Sequence[Number], lead: Number = 1) -> "RationalUniPoly":
        """lead * prod (t - r)."""
        poly = Poly.from_list([_to_sympy(to_fraction(lead))], T, domain=QQ)
        for r in roots:
            poly = poly * Poly.from_list([Rational(1), -_to_sympy(to_fraction(r))], T, domain=QQ)
        return cls.from_poly(poly)

    @classmethod
    def from_poly(cls, poly: Poly) -> "RationalUniPoly":
        return cls.from_coeffs([_from_sympy(c) for c in reversed(poly.all_coeffs())])

    @cached_property
    def poly(self) -> Poly:
        return _poly_from_ascending(self.coeffs)

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t: Number) -> Fraction:
        return eval_poly(self, t)

    def __mul__(self, other: "RationalUniPoly") -> "RationalUniPoly":
        return RationalUniPoly.from_poly(self.poly * other.poly)

    def __neg__(self) -> "RationalUniPoly":
        return RationalUniPoly(tuple(-c for c in self.coeffs))

    def derivative(self) -> "RationalUniPoly":
        return RationalUniPoly.from_coeffs([k * c for k, c in enumerate(self.coeffs)][1:])

    @cached_property
    def square_free(self) -> "RationalUniPoly":
        return square_free_part(self)

    @cached_property
    def sturm_sequence(self) -> tuple[Poly, ...]:
        return _sturm_sequence(self.square_free)


@dataclass(frozen=True)
class RootIsolation:
    """Disjoint half-open intervals (lo, hi], each holding exactly one distinct root."""

    intervals: tuple[tuple[Fraction, Fraction], ...]
    square_free: bool = True

    def __len__(self) -> int:
        return len(self.intervals)


def eval_poly(f: RationalUniPoly, t: Number) -> Fraction:
    """Exact Horner evaluation."""
    x = to_fraction(t)
    acc = Fraction(0)
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def square_free_part(f: RationalUniPoly) -> RationalUniPoly:
    """
    f / gcd(f, f'), which has the same distinct roots as f and no repeated ones.
    Raises ValueError for the zero polynomial.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has no square-free part")
    if f.degree <= 0:
        return f
    poly = f.poly
    g = poly.gcd(poly.diff())
    return RationalUniPoly.from_poly(poly.quo(g))


def _sturm_sequence(sqf: RationalUniPoly) -> tuple[Poly, ...]:
    if sqf.degree <= 0:
        return ()
    p0 = sqf.poly
    seq = [p0, p0.diff()]
    while True:
        r = seq[-2].rem(seq[-1])
        if r.is_zero:
            break
        # positive rescaling keeps signs and tames coefficient growth
        r = r.quo_ground(abs(r.LC()))
        seq.append(-r)
    return tuple(seq)


def _variations(seq: Sequence[Poly], x: Fraction) -> int:
    xr = _to_sympy(x)
    signs = []
    for p in seq:
        v = p.eval(xr)
        if v > 0:
            signs.append(1)
        elif v < 0:
            signs.append(-1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: RationalUniPoly, a: Number, b: Number) -> int:
    """
    Number of distinct real roots of f in the half-open interval (a, b].
    Raises ValueError for the zero polynomial or when a >= b.
    """
    if f.is_zero:
        raise ValueError("zero polynomial has infinitely many roots")
    lo, hi = to_fraction(a), to_fraction(b)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi}]")
    seq = f.sturm_sequence
    if not seq:
        return 0
    return _variations(seq, lo) - _variations(seq, hi)


def cauchy_bound(f: RationalUniPoly) -> Fraction:
    """Every real root r of f satisfies |r| < bound."""
    if f.is_zero:
        raise ValueError("zero polynomial has no root bound")
    lead = abs(f.coeffs[-1])
    return 1 + max((abs(c) / lead for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_roots(f: RationalUniPoly, a: Number, b: Number) -> RootIsolation:
    """
    Bisects (a, b] until every piece holds at most one distinct root.
    Raises ValueError for the zero polynomial.
    """
    if f.is_zero:
        raise ValueError("zero polynomial cannot be isolated")
    lo, hi = to_fraction(a), to_fraction(b)
    found: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, sturm_count(f, lo, hi))]
    while stack:
        left, right, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            found.append((left, right))
            continue
        mid = (left + right) / 2
        k_left = sturm_count(f, left, mid)
        stack.append((mid, right, k - k_left))
        stack.append((left, mid, k_left))
    return RootIsolation(intervals=tuple(found))


def isolate_all_roots(f: RationalUniPoly) -> RootIsolation:
    """Isolation over the whole real line."""
    if f.degree <= 0:
        return RootIsolation(intervals=())
    bound = cauchy_bound(f)
    return isolate_roots(f, -bound - 1, bound)


def refine_root(
    f: RationalUniPoly, interval: tuple[Fraction, Fraction], width: Number | None = None
) -> tuple[Fraction, Fraction]:
    """
    Shrinks an isolating interval (lo, hi] of f until hi - lo <= width.
    The default width is 2^-53 * max(1, |root|). A rational root comes back as (r, r).
    """
    sqf = f.square_free
    lo, hi = interval
    if eval_poly(sqf, hi) == 0:
        return hi, hi
    # lo may be the root of a neighbouring interval: step off it first
    while eval_poly(sqf, lo) == 0:
        mid = (lo + hi) / 2
        if sturm_count(f, lo, mid) == 1:
            hi = mid
            if eval_poly(sqf, hi) == 0:
                return hi, hi
        else:
            lo = mid
    s_lo = _sign(eval_poly(sqf, lo))
    while True:
        scale = max(Fraction(1), abs(lo), abs(hi))
        limit = to_fraction(width) if width is not None else scale / 2**53
        if hi - lo <= limit:
            return lo, hi
        mid = (lo + hi) / 2
        s_mid = _sign(eval_poly(sqf, mid))
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid


# ============================================================================
# Characteristic polynomials on a segment
# ============================================================================


def _segment(net: Network, p1: Sequence[Number], p2: Sequence[Number]):
    a = [to_fraction(c) for c in p1]
    b = [to_fraction(c) for c in p2]
    if len(a) != net.dim or len(b) != net.dim:
        raise ValueError(f"segment endpoints must have {net.dim} coordinate(s)")
    if a == b:
        raise ValueError("segment endpoints coincide")
    return a, b


def _distance_powers(net: Network, a: list[Fraction], b: list[Fraction]) -> list[Poly]:
    half = even_alpha(net) // 2
    direction = [y - x for x, y in zip(a, b)]
    quad_a = sum(d * d for d in direction)
    out = []
    for station in net.stations:
        offset = [x - to_fraction(c) for x, c in zip(a, station.pos)]
        quad_b = 2 * sum(o * d for o, d in zip(offset, direction))
        quad_c = sum(o * o for o in offset)
        q = Poly.from_list([_to_sympy(quad_a), _to_sympy(quad_b), _to_sympy(quad_c)], T, domain=QQ)
        out.append(q**half)
    return out


def _characteristic_from_distances(
    net: Network, i: int, dists: list[Poly], beta: Fraction
) -> Poly:
    one = Poly.from_list([Rational(1)], T, domain=QQ)
    prefix = [one]
    for d in dists:
        prefix.append(prefix[-1] * d)
    suffix = [one]
    for d in reversed(dists):
        suffix.append(suffix[-1] * d)
    suffix.reverse()

    n = len(dists)
    interferers = Poly.from_list([Rational(0)], T, domain=QQ)
    for k in range(n):
        if k == i:
            continue
        without_k = prefix[k] * suffix[k + 1]
        interferers = interferers + without_k.mul_ground(_to_sympy(to_fraction(net.stations[k].power)))
    noise_term = prefix[n].mul_ground(_to_sympy(to_fraction(net.noise)))
    own = (prefix[i] * suffix[i + 1]).mul_ground(_to_sympy(to_fraction(net.stations[i].power)))
    return (interferers + noise_term).mul_ground(_to_sympy(beta)) - own


def restrict_characteristic(
    net: Network,
    i: int,
    p1: Sequence[Number],
    p2: Sequence[Number],
    beta_override: Number | None = None,
) -> RationalUniPoly:
    """
    F(t) for p(t) = p1 + t (p2 - p1), where
    F = beta (sum_{k!=i} psi_k prod_{l!=k} D_l + N prod_l D_l) - psi_i prod_{l!=i} D_l
    and D_l = |p(t) - s_l|^alpha. F(t) <= 0 exactly when p(t) is in Z_i.
    Raises ValueError for odd or non-integer alpha and for p1 == p2.
    """
    a, b = _segment(net, p1, p2)
    beta = to_fraction(net.beta if beta_override is None else beta_override)
    dists = _distance_powers(net, a, b)
    return RationalUniPoly.from_poly(_characteristic_from_distances(net, i, dists, beta))


def restrict_noise(
    net: Network, p1: Sequence[Number], p2: Sequence[Number]
) -> RationalUniPoly:
    """-prod_i F^i(t): negative exactly on the silent part of the segment (beta >= 1)."""
    a, b = _segment(net, p1, p2)
    beta = to_fraction(net.beta)
    dists = _distance_powers(net, a, b)
    product = Poly.from_list([Rational(-1)], T, domain=QQ)
    for i in range(net.n):
        product = product * _characteristic_from_distances(net, i, dists, beta)
    return RationalUniPoly.from_poly(product)


def exact_sinr_sign(
    net: Network, i: int, p: Sequence[Number], beta: Number | None = None
) -> int:
    """
    Sign of beta * (I + N) - E at p in exact arithmetic
    (-1: heard with margin, 0: on the boundary, 1: not heard).
    Raises ValueError at a station position.
    """
    half = even_alpha(net) // 2
    point = [to_fraction(c) for c in p]
    threshold = to_fraction(net.beta if beta is None else beta)
    energies = []
    for station in net.stations:
        d2 = sum((x - to_fraction(c)) ** 2 for x, c in zip(point, station.pos))
        if d2 == 0:
            raise ValueError("SINR undefined at station positions")
        energies.append(to_fraction(station.power) / d2**half)
    interference = sum(e for k, e in enumerate(energies) if k != i)
    return _sign(threshold * (interference + to_fraction(net.noise)) - energies[i])


def nonpositive_on(f: RationalUniPoly, a: Number, b: Number) -> bool:
    """True when f(t) <= 0 for every t in the closed interval [a, b]."""
    if f.is_zero:
        return True
    lo, hi = to_fraction(a), to_fraction(b)
    f_lo = eval_poly(f, lo)
    if f_lo > 0 or eval_poly(f, hi) > 0:
        return False
    brackets = [refine_root(f, interval) for interval in isolate_roots(f, lo, hi).intervals]
    samples = []
    if f_lo == 0 and brackets:
        samples.append((lo + brackets[0][0]) / 2)
    for (_, b_prev), (a_next, _) in zip(brackets, brackets[1:]):
        samples.append((b_prev + a_next) / 2)
    return all(eval_poly(f, t) < 0 for t in samples)

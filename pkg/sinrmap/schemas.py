"""
Pydantic schemas for networks, descriptors and reports.
"""
import math
from typing import Annotated, Literal, Optional

from pydantic import (
    AliasChoices,
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    model_validator,
)


def parse_point(value):
    """
    Accepts a point either as a sequence of numbers or as a comma separated string.
    Examples: "1,2" -> (1.0, 2.0), [0, 0, 3] -> (0.0, 0.0, 3.0)
    """
    if isinstance(value, str):
        parts = [part for part in value.replace(" ", "").split(",") if part]
        if not parts:
            raise ValueError("point must have at least one coordinate")
        value = [float(part) for part in parts]
    coords = tuple(float(c) for c in value)
    if not coords:
        raise ValueError("point must have at least one coordinate")
    if not all(math.isfinite(c) for c in coords):
        raise ValueError(f"point coordinates must be finite, got {coords}")
    return coords


# Custom type that accepts "x,y[,z]" strings as well as lists
Point = Annotated[tuple[float, ...], BeforeValidator(parse_point)]


class Station(BaseModel):
    """A transmitting station: label, position and transmission power."""

    model_config = ConfigDict(frozen=True)

    id: str
    pos: Point
    power: float


class Network(BaseModel):
    """The tuple <d, S, Psi, N, beta, alpha>. Field names match the network JSON format."""

    model_config = ConfigDict(frozen=True)

    dim: int
    alpha: float
    beta: float
    noise: float
    stations: tuple[Station, ...]

    @property
    def n(self) -> int:
        return len(self.stations)

    @property
    def overlapping_zones(self) -> bool:
        """True when beta < 1, where reception zones may overlap."""
        return self.beta < 1


class SimilarityTransform(BaseModel):
    """x -> scale * rotation @ x + translation."""

    rotation: tuple[tuple[float, ...], ...]
    translation: Point
    scale: float = Field(gt=0, description="Scaling factor sigma")


class ReceptionTag(BaseModel):
    """Which station is heard at a point. station=None means the point is silent."""

    station: Optional[int] = None
    unique: bool = True

    @property
    def silent(self) -> bool:
        return self.station is None


class FatnessBounds(BaseModel):
    """Inscribed/enclosing radius bounds of a reception zone about its station."""

    station: int
    delta: float
    rho_hat: float
    lemma_rho_hat: float
    delta_hat: float
    phi_hat: float
    perimeter_bound: float
    unbounded: bool = False


class TwoStationConfig(BaseModel):
    """
    Closed-form zone of station 1 in a two-station network, described in the
    canonical frame (station 1 at the origin, station 2 at (a, 0, ...)).
    """

    kind: Literal["disk", "disk_complement", "halfplane"]
    station: int
    tau: float
    a: float
    alpha: float
    center: Optional[Point] = None
    radius: Optional[float] = None
    offset: Optional[float] = None
    transform: SimilarityTransform
    approximate: bool = False
    boundary: list[Point] = Field(default_factory=list)


class Wire(BaseModel):
    """Continuous wire W(q, r, P): infinitely many weak stations on a circle."""

    center: Point
    radius: float = Field(gt=0)
    power: float = Field(gt=0)


class WireNetwork(BaseModel):
    """Regular stations plus wires whose interference enters analytically."""

    network: Network
    wires: list[Wire] = Field(default_factory=list)


class Geodesic(BaseModel):
    """Hyperbolic geodesic between two points of the upper half-space."""

    kind: Literal["vertical_segment", "arc"]
    p1: Point
    p2: Point
    center: Optional[Point] = None
    radius: Optional[float] = None
    direction: Optional[Point] = None
    angles: Optional[tuple[float, float]] = None


class VerificationReport(BaseModel):
    """Outcome of one checker run, emitted as {check, instance_seed, pass, witness?}."""

    model_config = ConfigDict(populate_by_name=True)

    check: str
    instance_seed: Optional[int] = None
    passed: bool = Field(
        serialization_alias="pass",
        validation_alias=AliasChoices("pass", "passed"),
    )
    witness: Optional[dict] = None
    detail: Optional[str] = None

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True)


class CellCount1D(BaseModel):
    """Per-station cell counts of a 1D network."""

    per_station: list[int]
    total: int
    bound: int
    weakest: int
    weakest_cells: int

    @property
    def within_bound(self) -> bool:
        return self.total <= self.bound


class CellCountReport(BaseModel):
    """Result of grid-based cell counting in the plane."""

    zone: str
    count: int
    grid_step: float
    refinements: int
    converged: bool
    history: list[int]
    bounds: tuple[float, float, float, float]
    milnor_thom_reference: int


class AreaReport(BaseModel):
    """Grid estimate of a zone's area and the explicit fatness bounds around it."""

    station: int
    area: float
    grid_step: float
    lower_bound: float
    upper_bound: float
    lower_ok: bool
    upper_ok: bool


class OmegaReport(BaseModel):
    """Verification of the n+1-cell construction."""

    n: int
    radius: int
    p0: float
    lower: float
    upper: float
    feasible: bool
    r1_passed: bool
    r2_passed: bool
    r2_samples: int
    min_center_sinr: float
    max_boundary_sinr: float


class WireReport(BaseModel):
    """Verification of the logarithmic wire construction."""

    rho: int
    p1: float
    noise: float
    feasibility_bound: float
    feasible: bool
    test_points: list[float]
    sinr_values: list[float]
    inner_interference: list[float]
    outer_interference: list[float]
    passed: bool


class LocateResult(BaseModel):
    """Answer of a partition query: owner station and its cell tag."""

    station: Optional[int] = None
    tag: str


class RenderSpec(BaseModel):
    """What to draw and where."""

    bounds: tuple[float, float, float, float]
    width: int = Field(gt=0)
    height: int = Field(gt=0)
    mode: Literal["zones", "sinr_heatmap", "qds_tags"] = "zones"
    fmt: Literal["ppm", "svg"] = "ppm"

    @model_validator(mode="after")
    def check_bounds(self):
        x0, y0, x1, y1 = self.bounds
        if not (x1 > x0 and y1 > y0):
            raise ValueError(f"bounds must have positive area, got {self.bounds}")
        return self

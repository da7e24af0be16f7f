"""
Runtime configuration for sinrmap.
All numeric knobs live on one Settings object; each field can be overridden
with a SINRMAP_<FIELD> environment variable.
"""
import os

from pydantic import BaseModel, Field

ENV_PREFIX = "SINRMAP_"


class Settings(BaseModel):
    """Tunable limits and defaults shared by the library and the CLI."""

    log_level: str = "WARNING"

    # Exact Sturm work is skipped above this polynomial degree (count_cells_2d fallback only)
    exact_max_degree: int = Field(default=48, ge=1)
    # Relative slack applied to every floating-point certificate
    certificate_margin: float = Field(default=1e-9, gt=0)

    flood_max_refinements: int = Field(default=3, ge=0)
    flood_max_cells: int = Field(default=4_000_000, ge=1)
    link_max_depth: int = Field(default=12, ge=0)
    # Edge subdivision levels tried before an exact Sturm test
    edge_certificate_depth: int = Field(default=6, ge=0, le=16)

    scheme_a_c1: float = Field(default=1.0, gt=0)
    scheme_a_c2: float = Field(default=1.0, gt=0)
    epsilon_bits: int = Field(default=20, ge=4, le=52)
    qds_max_cells: int = Field(default=16_000_000, ge=1)

    geodesic_samples: int = Field(default=1000, ge=2)
    boundary_band: float = Field(default=1e-9, ge=0)
    omega_radius_cap: int = Field(default=10_000, ge=1)

    svg_pixel_limit: int = Field(default=128 * 128, ge=1)
    default_seed: int = 7
    default_trials: int = Field(default=20, ge=1)


def load_settings() -> Settings:
    """
    Builds Settings from defaults plus any SINRMAP_* environment overrides.
    Raises pydantic.ValidationError if an override cannot be coerced.
    """
    overrides = {}
    for name in Settings.model_fields:
        key = ENV_PREFIX + name.upper()
        if key in os.environ:
            overrides[name] = os.environ[key]
    return Settings(**overrides)


settings = load_settings()

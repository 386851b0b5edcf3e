"""Electrostatic-style analytics for market data.

Assets become charged points in a normalized information space; an
inverse-square field over those charges drives force, work, and energy
accounting, an energy-decomposition indicator for OHLCV series, and a
deterministic call-auction simulator for equilibrium price paths.
"""

from .auction import (
    ClearingResult,
    MarketState,
    Order,
    SimulationTrace,
    StepRecord,
    TraceRecord,
    aggregate_demand,
    aggregate_supply,
    clear_auction,
    parse_book_csv,
    parse_scenario_csv,
    replay,
    run_scenario,
    step,
)
from .config import CONFIG_ENV_VAR, RunConfig, dump_config, load_config, parse_config_text
from .energy_engine import (
    PolylinePath,
    PotentialModel,
    market_work,
    potential_at_rate,
    potential_delta,
    work_closed_form,
    work_line_integral,
)
from .errors import (
    ConfigError,
    DegeneratePathError,
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    FieldMarketError,
    FormatError,
    NonFiniteError,
    OhlcRangeError,
    TimestampOrderError,
    UsageError,
)
from .field_engine import (
    FieldParams,
    FieldVector,
    field_at,
    field_decay_profile,
    field_magnitude,
    force_on,
    pairwise_force,
)
from .formats import parse_assets_csv, parse_ohlcv_csv, render_ohlcv_csv
from .info_space import (
    FeatureVector,
    InformationCharge,
    NormalizationSpec,
    info_distance,
    normalize_features,
    total_charge,
)
from .series_energy import (
    Bar,
    EnergyTrace,
    energy_decomposition,
    kinetic_series,
    potential_series,
    velocity_series,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # info space
    "FeatureVector",
    "InformationCharge",
    "NormalizationSpec",
    "normalize_features",
    "info_distance",
    "total_charge",
    # field engine
    "FieldParams",
    "FieldVector",
    "field_at",
    "field_magnitude",
    "force_on",
    "pairwise_force",
    "field_decay_profile",
    # energy engine
    "PolylinePath",
    "PotentialModel",
    "work_closed_form",
    "work_line_integral",
    "market_work",
    "potential_at_rate",
    "potential_delta",
    # series energy
    "Bar",
    "EnergyTrace",
    "velocity_series",
    "kinetic_series",
    "potential_series",
    "energy_decomposition",
    # auction
    "Order",
    "ClearingResult",
    "MarketState",
    "StepRecord",
    "TraceRecord",
    "SimulationTrace",
    "aggregate_demand",
    "aggregate_supply",
    "clear_auction",
    "step",
    "replay",
    "run_scenario",
    "parse_book_csv",
    "parse_scenario_csv",
    # io
    "RunConfig",
    "CONFIG_ENV_VAR",
    "load_config",
    "parse_config_text",
    "dump_config",
    "parse_ohlcv_csv",
    "render_ohlcv_csv",
    "parse_assets_csv",
    # errors
    "FieldMarketError",
    "DimensionMismatchError",
    "NonFiniteError",
    "DomainError",
    "EmptyInputError",
    "DegeneratePathError",
    "FormatError",
    "OhlcRangeError",
    "TimestampOrderError",
    "ConfigError",
    "UsageError",
]

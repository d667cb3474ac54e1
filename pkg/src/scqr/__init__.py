"""Three-qubit self-contained refrigerator with bosonic and fermionic reservoirs."""

from scqr.dynamics import (
    QubitSpec,
    SystemConfig,
    build_h0,
    build_hint,
    build_liouvillian,
    steady_state,
)
from scqr.errors import (
    DegenerateKernel,
    InvertedPopulation,
    NoSignChange,
    NumericalFailure,
    ScqrError,
)
from scqr.reservoir import ExchangeRates, ReservoirKind, ReservoirSpec, exchange_rates, occupation
from scqr.thermometry import analytic_isolated_t1, cooling_percentage, effective_temperature

__version__ = "0.1.0"

__all__ = [
    "DegenerateKernel",
    "ExchangeRates",
    "InvertedPopulation",
    "NoSignChange",
    "NumericalFailure",
    "QubitSpec",
    "ReservoirKind",
    "ReservoirSpec",
    "ScqrError",
    "SystemConfig",
    "analytic_isolated_t1",
    "build_h0",
    "build_hint",
    "build_liouvillian",
    "cooling_percentage",
    "effective_temperature",
    "exchange_rates",
    "occupation",
    "steady_state",
]

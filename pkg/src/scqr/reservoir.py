"""Thermal occupations and Lindblad exchange rates for bosonic/fermionic baths.

Natural units (k_B = hbar = 1). Rates carry the units of the bare
dissipation rate ``gamma``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scqr.errors import DomainError

# above this E/T the occupation is below 1e-300 and exp() would overflow
_EXP_CUTOFF = 700.0


class ReservoirKind(enum.Enum):
    BOSONIC = "B"
    FERMIONIC = "F"

    @classmethod
    def parse(cls, tag: str | ReservoirKind) -> ReservoirKind:
        if isinstance(tag, cls):
            return tag
        try:
            return cls(str(tag).upper())
        except ValueError:
            raise ValueError(f"reservoir kind must be 'B' or 'F', got {tag!r}") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ReservoirSpec:
    kind: ReservoirKind
    temperature: float

    def __post_init__(self):
        object.__setattr__(self, "kind", ReservoirKind.parse(self.kind))
        if not self.temperature > 0:
            raise DomainError(f"reservoir temperature must be positive, got {self.temperature}")


@dataclass(frozen=True)
class ExchangeRates:
    """Emission (``gamma_down``) and absorption (``gamma_up``) rates of one qubit."""

    gamma_down: float
    gamma_up: float


def occupation(kind: ReservoirKind | str, energy: float, temperature: float) -> float:
    """Mean excitation number of a bath mode at ``energy`` and ``temperature``.

    Bose-Einstein ``1/(e^{E/T} - 1)`` for bosonic reservoirs and
    Fermi-Dirac ``1/(e^{E/T} + 1)`` for fermionic ones.
    """
    kind = ReservoirKind.parse(kind)
    if not energy > 0:
        raise DomainError(f"energy must be positive, got {energy}")
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature}")
    x = energy / temperature
    if x > _EXP_CUTOFF:
        return 0.0
    if kind is ReservoirKind.BOSONIC:
        return 1.0 / math.expm1(x)
    return 1.0 / (math.exp(x) + 1.0)


def exchange_rates(
    kind: ReservoirKind | str, gamma: float, energy: float, temperature: float
) -> ExchangeRates:
    """Lindblad rates for a qubit of gap ``energy`` coupled with strength ``gamma``.

    Bosonic: ``(gamma (1 + n), gamma n)``; fermionic: ``(gamma (1 - n), gamma n)``.
    ``gamma == 0`` is allowed and describes an isolated qubit.
    """
    kind = ReservoirKind.parse(kind)
    if gamma < 0:
        raise DomainError(f"dissipation rate must be nonnegative, got {gamma}")
    n = occupation(kind, energy, temperature)
    if kind is ReservoirKind.BOSONIC:
        return ExchangeRates(gamma * (1.0 + n), gamma * n)
    return ExchangeRates(gamma * (1.0 - n), gamma * n)

"""Effective qubit temperatures and cooling figures of merit."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from scqr.errors import DomainError, InvertedPopulation, NonThermalStateWarning

COHERENCE_WARN = 1e-6


@dataclass(frozen=True)
class QubitThermometry:
    p_ground: float
    p_excited: float
    coherence_magnitude: float
    effective_temperature: float
    inverted: bool = False


def effective_temperature(reduced, energy_gap: float) -> QubitThermometry:
    """Gibbs temperature ``E / ln(p_g / p_e)`` of a single-qubit state.

    ``reduced`` uses index 0 for the excited level. Off-diagonal elements
    are ignored for the temperature but reported, and a
    :class:`NonThermalStateWarning` is issued when they exceed 1e-6.
    """
    reduced = np.asarray(reduced)
    if reduced.shape != (2, 2):
        raise ValueError(f"expected a 2x2 reduced state, got shape {reduced.shape}")
    if not energy_gap > 0:
        raise DomainError(f"energy gap must be positive, got {energy_gap}")
    p_e = float(reduced[0, 0].real)
    p_g = float(reduced[1, 1].real)
    coherence = float(abs(reduced[0, 1]))
    if p_e >= p_g:
        raise InvertedPopulation(
            f"p_excited={p_e:.6g} >= p_ground={p_g:.6g}: no positive temperature"
        )
    if coherence > COHERENCE_WARN:
        warnings.warn(
            f"reduced state has coherence {coherence:.3g}; temperature uses populations only",
            NonThermalStateWarning,
            stacklevel=2,
        )
    temperature = 0.0 if p_e <= 0 else energy_gap / math.log(p_g / p_e)
    return QubitThermometry(p_g, p_e, coherence, temperature, inverted=False)


def cooling_percentage(t1: float, tc: float) -> float:
    """``100 |t1 - tc| / tc``. The sign of ``t1 - tc`` says whether it is cooling."""
    return 100.0 * abs(t1 - tc) / tc


def analytic_isolated_t1(e1: float, e3: float, tc: float, th: float) -> float:
    """Qubit-1 temperature when it is fully decoupled from its own bath.

    ``tc / (1 + (e3/e1) (1 - tc/th))``. Valid when the room bath is at the
    cold temperature; see :func:`virtual_qubit_t1` for the general case.
    """
    for name, value in (("e1", e1), ("e3", e3), ("tc", tc), ("th", th)):
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")
    denominator = 1.0 + (e3 / e1) * (1.0 - tc / th)
    if denominator <= 0:
        raise DomainError(f"denominator {denominator:.6g} <= 0: inputs outside the cooling regime")
    return tc / denominator


def virtual_qubit_t1(e1: float, e2: float, e3: float, tr: float, th: float) -> float:
    """Isolated qubit-1 temperature for arbitrary room temperature: ``e1 / (e2/tr - e3/th)``.

    Reduces to :func:`analytic_isolated_t1` when ``tr == tc`` and ``e2 = e1 + e3``.
    """
    inverse = e2 / tr - e3 / th
    if inverse <= 0:
        raise DomainError("virtual qubit is at infinite or negative temperature")
    return e1 / inverse

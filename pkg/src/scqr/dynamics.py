"""Hamiltonian, Lindblad generator and steady state of the three-qubit refrigerator.

Qubit 1 is the one being cooled (cold bath, T_c), qubit 2 sits at the
"room" bath (T_r) and qubit 3 at the hot bath (T_h). The three-body
exchange ``g (s1- s2+ s3- + h.c.)`` swaps |ege> and |geg>, which are
degenerate when E3 = E2 - E1.

Density matrices are vectorized by stacking columns, so that
``vec(A X B) = (B^T ⊗ A) vec(X)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from scqr.errors import DegenerateKernel, DomainError, NumericalFailure
from scqr.hilbert import DIM, SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, embed, partial_trace
from scqr.reservoir import ExchangeRates, ReservoirKind, ReservoirSpec, exchange_rates

KERNEL_GAP_MIN = 1e3
RESIDUAL_MAX = 1e-10


@dataclass(frozen=True)
class QubitSpec:
    energy_gap: float
    dissipation: float

    def __post_init__(self):
        if not self.energy_gap > 0:
            raise DomainError(f"energy gap must be positive, got {self.energy_gap}")
        if not self.dissipation >= 0:
            raise DomainError(f"dissipation rate must be nonnegative, got {self.dissipation}")


@dataclass(frozen=True)
class SystemConfig:
    """Full input of one steady-state calculation."""

    qubits: tuple[QubitSpec, QubitSpec, QubitSpec]
    reservoirs: tuple[ReservoirSpec, ReservoirSpec, ReservoirSpec]
    coupling: float

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "reservoirs", tuple(self.reservoirs))
        if len(self.qubits) != 3 or len(self.reservoirs) != 3:
            raise ValueError("exactly three qubits and three reservoirs are required")
        if not self.coupling >= 0:
            raise DomainError(f"coupling must be nonnegative, got {self.coupling}")

    @classmethod
    def build(
        cls,
        energies: Sequence[float],
        gammas: Sequence[float],
        coupling: float,
        kinds: Sequence[ReservoirKind | str] | str,
        temperatures: Sequence[float],
    ) -> SystemConfig:
        """Convenience constructor, e.g. ``build((1, 5, 4), (g,) * 3, g, "FBF", (2, 2, 10))``."""
        return cls(
            qubits=tuple(QubitSpec(e, gm) for e, gm in zip(energies, gammas, strict=True)),
            reservoirs=tuple(
                ReservoirSpec(ReservoirKind.parse(k), t)
                for k, t in zip(kinds, temperatures, strict=True)
            ),
            coupling=coupling,
        )

    @property
    def energies(self) -> tuple[float, float, float]:
        return tuple(q.energy_gap for q in self.qubits)

    @property
    def temperatures(self) -> tuple[float, float, float]:
        return tuple(r.temperature for r in self.reservoirs)

    @property
    def label(self) -> str:
        return "".join(r.kind.value for r in self.reservoirs)

    def resonance_mismatch(self) -> float:
        """|E3 - (E2 - E1)|; zero in the refrigeration regime."""
        e1, e2, e3 = self.energies
        return abs(e3 - (e2 - e1))

    def temperatures_ordered(self) -> bool:
        tc, tr, th = self.temperatures
        return tc <= tr <= th

    def with_temperatures(self, tc=None, tr=None, th=None) -> SystemConfig:
        new = [tc, tr, th]
        reservoirs = tuple(
            r if t is None else replace(r, temperature=t) for r, t in zip(self.reservoirs, new)
        )
        return replace(self, reservoirs=reservoirs)

    def with_kinds(self, kinds: Sequence[ReservoirKind | str] | str) -> SystemConfig:
        reservoirs = tuple(
            replace(r, kind=ReservoirKind.parse(k)) for r, k in zip(self.reservoirs, kinds, strict=True)
        )
        return replace(self, reservoirs=reservoirs)

    def with_dissipation(self, site: int, gamma: float) -> SystemConfig:
        qubits = list(self.qubits)
        qubits[site - 1] = replace(qubits[site - 1], dissipation=gamma)
        return replace(self, qubits=tuple(qubits))

    def rates(self) -> tuple[ExchangeRates, ExchangeRates, ExchangeRates]:
        return tuple(
            exchange_rates(r.kind, q.dissipation, q.energy_gap, r.temperature)
            for q, r in zip(self.qubits, self.reservoirs)
        )


def build_h0(config: SystemConfig) -> np.ndarray:
    """Free Hamiltonian sum_k (E_k / 2) sigma_z,k."""
    h = np.zeros((DIM, DIM), dtype=complex)
    for k, e in enumerate(config.energies, start=1):
        h += 0.5 * e * embed(SIGMA_Z, k)
    return h


def build_hint(config: SystemConfig) -> np.ndarray:
    """Three-body exchange g (s1- s2+ s3- + s1+ s2- s3+)."""
    forward = embed(SIGMA_MINUS, 1) @ embed(SIGMA_PLUS, 2) @ embed(SIGMA_MINUS, 3)
    return config.coupling * (forward + forward.conj().T)


def _left(a: np.ndarray) -> np.ndarray:
    # vec(A X) = (I ⊗ A) vec(X)
    return np.kron(np.eye(a.shape[0]), a)


def _right(b: np.ndarray) -> np.ndarray:
    # vec(X B) = (B^T ⊗ I) vec(X)
    return np.kron(b.T, np.eye(b.shape[0]))


def dissipator(c: np.ndarray, rate: float) -> np.ndarray:
    """Superoperator of rate * (c X c† - {c†c, X}/2)."""
    cdc = c.conj().T @ c
    return rate * (np.kron(c.conj(), c) - 0.5 * _left(cdc) - 0.5 * _right(cdc))


def hamiltonian_superoperator(h: np.ndarray) -> np.ndarray:
    """Superoperator of -i[H, X]."""
    return -1j * (_left(h) - _right(h))


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    n = math.isqrt(v.size)
    return np.asarray(v).reshape((n, n), order="F")


@dataclass(frozen=True)
class Liouvillian:
    """64x64 generator acting on column-stacked density matrices."""

    matrix: np.ndarray
    config: SystemConfig | None = None

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))

    def trace_defect(self) -> float:
        """max |vec(I)† L|; zero for a trace-preserving generator."""
        return float(np.max(np.abs(vec(np.eye(DIM)).conj() @ self.matrix)))

    def max_real_eigenvalue(self) -> float:
        return float(np.max(np.linalg.eigvals(self.matrix).real))

    def validate(self, trace_tol: float = 1e-10, spectrum_tol: float = 1e-8) -> None:
        defect = self.trace_defect()
        if defect > trace_tol:
            raise NumericalFailure(f"generator is not trace preserving (defect {defect:.3g})")
        top = self.max_real_eigenvalue()
        if top > spectrum_tol:
            raise NumericalFailure(f"generator has eigenvalue with real part {top:.3g} > 0")


def build_liouvillian(config: SystemConfig) -> Liouvillian:
    h = build_h0(config) + build_hint(config)
    lmat = hamiltonian_superoperator(h)
    for k, rates in enumerate(config.rates(), start=1):
        lmat = lmat + dissipator(embed(SIGMA_MINUS, k), rates.gamma_down)
        lmat = lmat + dissipator(embed(SIGMA_PLUS, k), rates.gamma_up)
    return Liouvillian(lmat, config)


@dataclass(frozen=True)
class SteadyState:
    rho: np.ndarray
    residual: float
    kernel_gap: float
    trace_error: float
    min_eigenvalue: float
    hermiticity_error: float

    def reduced(self, site: int) -> np.ndarray:
        return partial_trace(self.rho, site)


def steady_state(liouvillian: Liouvillian | np.ndarray) -> SteadyState:
    """Unique fixed point of the generator, from its smallest right-singular vector.

    Raises :class:`DegenerateKernel` when the two smallest singular values
    are within a factor 1e3 of each other, and :class:`NumericalFailure`
    when the normalized state leaves a residual above 1e-10.
    """
    lmat = liouvillian.matrix if isinstance(liouvillian, Liouvillian) else np.asarray(liouvillian)
    _, s, vh = np.linalg.svd(lmat)
    smallest, second = s[-1], s[-2]
    kernel_gap = math.inf if smallest == 0 else float(second / smallest)
    if kernel_gap < KERNEL_GAP_MIN:
        raise DegenerateKernel(
            f"steady state is not unique: singular values {second:.3g} and {smallest:.3g}"
        )
    rho = unvec(vh[-1].conj())
    tr = np.trace(rho)
    if abs(tr) < 1e-300:
        raise NumericalFailure("null vector has zero trace")
    rho = rho / tr
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real

    residual = float(np.linalg.norm(lmat @ vec(rho)))
    if residual > RESIDUAL_MAX:
        raise NumericalFailure(f"steady-state residual {residual:.3g} exceeds {RESIDUAL_MAX:g}")
    return SteadyState(
        rho=rho,
        residual=residual,
        kernel_gap=kernel_gap,
        trace_error=float(abs(np.trace(rho) - 1.0)),
        min_eigenvalue=float(np.linalg.eigvalsh(rho).min()),
        hermiticity_error=float(np.max(np.abs(rho - rho.conj().T))),
    )


def solve(config: SystemConfig) -> SteadyState:
    """``steady_state(build_liouvillian(config))``."""
    return steady_state(build_liouvillian(config))


def thermal_product_state(config: SystemConfig) -> np.ndarray:
    """Product of single-qubit Gibbs states at each qubit's bath temperature.

    This is the exact steady state when g = 0 and every gamma_k > 0.
    """
    rho = np.ones((1, 1), dtype=complex)
    for e, t in zip(config.energies, config.temperatures):
        w = math.exp(-e / t)
        rho = np.kron(rho, np.diag([w / (1 + w), 1 / (1 + w)]))
    return rho

"""Dense operators on the 8-dimensional three-qubit space.

Basis convention: qubit 1 is the leftmost tensor factor, and within each
qubit index 0 is the excited state |e> and index 1 the ground state |g>.
Computational index 0 is therefore |eee>.
"""

from functools import reduce

import numpy as np

N_QUBITS = 3
DIM = 2**N_QUBITS

IDENTITY = np.eye(2, dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# sigma_+ = |e><g|, sigma_- = |g><e|
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


def _check_site(site: int) -> int:
    if site not in (1, 2, 3):
        raise ValueError(f"qubit index must be 1, 2 or 3, got {site!r}")
    return site


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return np.kron(np.asarray(a), np.asarray(b))


def embed(op2x2, site: int) -> np.ndarray:
    """Lift a single-qubit operator to the full space, acting on qubit ``site``.

    >>> np.diag(embed(SIGMA_Z, 1)).real.astype(int).tolist()
    [1, 1, 1, 1, -1, -1, -1, -1]
    """
    op = np.asarray(op2x2, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {op.shape}")
    _check_site(site)
    factors = [IDENTITY] * N_QUBITS
    factors[site - 1] = op
    return reduce(np.kron, factors)


def partial_trace(rho, keep: int) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` (the other two qubits traced out)."""
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected an {DIM}x{DIM} state, got shape {rho.shape}")
    _check_site(keep)
    t = rho.reshape((2,) * (2 * N_QUBITS))
    # axes 0..2 are row indices of qubits 1..3, axes 3..5 the column indices
    k = keep - 1
    others = [q for q in range(N_QUBITS) if q != k]
    for q in sorted(others, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + t.ndim // 2)
    return t


def is_hermitian(m, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def basis_index(states: str) -> int:
    """Computational index of a product state written like ``"ege"``."""
    if len(states) != N_QUBITS or set(states) - {"e", "g"}:
        raise ValueError(f"expected three characters from 'e'/'g', got {states!r}")
    return int("".join("0" if s == "e" else "1" for s in states), 2)

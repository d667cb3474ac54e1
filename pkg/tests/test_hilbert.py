import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from scqr.hilbert import (
    IDENTITY,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    basis_index,
    embed,
    kron,
    partial_trace,
)


def kron_oracle(a, b):
    a, b = np.asarray(a), np.asarray(b)
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=complex)
    for i, j, k, l in itertools.product(
        range(a.shape[0]), range(a.shape[1]), range(b.shape[0]), range(b.shape[1])
    ):
        out[i * b.shape[0] + k, j * b.shape[1] + l] = a[i, j] * b[k, l]
    return out


def partial_trace_oracle(rho, keep):
    # bit (3 - q) of the basis index belongs to qubit q
    out = np.zeros((2, 2), dtype=complex)
    for i in range(8):
        for j in range(8):
            bits_i = [(i >> (3 - q)) & 1 for q in (1, 2, 3)]
            bits_j = [(j >> (3 - q)) & 1 for q in (1, 2, 3)]
            if all(bits_i[q] == bits_j[q] for q in range(3) if q != keep - 1):
                out[bits_i[keep - 1], bits_j[keep - 1]] += rho[i, j]
    return out


def random_density(rng, dim=8):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_kron_identity():
    np.testing.assert_array_equal(kron(IDENTITY, IDENTITY), np.eye(4))


def test_kron_sigma_z_identity():
    np.testing.assert_array_equal(kron(SIGMA_Z, IDENTITY), np.diag([1, 1, -1, -1]))


def test_kron_matches_index_loop():
    np.testing.assert_array_equal(kron(SIGMA_MINUS, SIGMA_PLUS), kron_oracle(SIGMA_MINUS, SIGMA_PLUS))


def test_kron_rectangular(rng):
    a = rng.normal(size=(2, 3))
    b = rng.normal(size=(3, 1))
    np.testing.assert_allclose(kron(a, b), kron_oracle(a, b), atol=0)


def test_embed_identity():
    np.testing.assert_array_equal(embed(IDENTITY, 2), np.eye(8))


def test_embed_leftmost_convention():
    np.testing.assert_array_equal(embed(SIGMA_Z, 1), np.diag([1, 1, 1, 1, -1, -1, -1, -1]))


def test_embed_excited_projector():
    proj = embed(SIGMA_PLUS, 1) @ embed(SIGMA_MINUS, 1)
    # qubit 1 excited <=> leading bit of the index is 0
    expected = np.diag([1.0 if (i >> 2) & 1 == 0 else 0.0 for i in range(8)])
    np.testing.assert_array_equal(proj, expected)


@pytest.mark.parametrize("bad", [np.eye(3), np.eye(4)])
def test_embed_rejects_wrong_shape(bad):
    with pytest.raises(ValueError):
        embed(bad, 1)


@pytest.mark.parametrize("site", [0, 4, -1])
def test_embed_rejects_bad_site(site):
    with pytest.raises(ValueError):
        embed(SIGMA_Z, site)


def test_partial_trace_product_state(rng):
    a, b, c = (random_density(rng, 2) for _ in range(3))
    rho = kron(kron(a, b), c)
    for k, factor in ((1, a), (2, b), (3, c)):
        np.testing.assert_allclose(partial_trace(rho, k), factor, atol=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_partial_trace_maximally_mixed(k):
    np.testing.assert_allclose(partial_trace(np.eye(8) / 8, k), np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_partial_trace_matches_summation(rng, k):
    rho = random_density(rng)
    np.testing.assert_allclose(partial_trace(rho, k), partial_trace_oracle(rho, k), atol=1e-13)


def test_partial_trace_rejects_wrong_shape():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, 1)


def test_basis_index():
    assert basis_index("eee") == 0
    assert basis_index("ggg") == 7
    assert basis_index("ege") == 0b010
    with pytest.raises(ValueError):
        basis_index("exe")


complex2x2 = arrays(
    np.complex128,
    (2, 2),
    elements=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
)


@settings(max_examples=50, deadline=None)
@given(complex2x2, complex2x2, st.sampled_from([(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)]))
def test_disjoint_sites_commute(a, b, sites):
    j, k = sites
    x, y = embed(a, j), embed(b, k)
    np.testing.assert_allclose(x @ y, y @ x, atol=1e-13, rtol=0)


@settings(max_examples=50, deadline=None)
@given(arrays(np.complex128, (8, 8), elements=st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False)),
       st.sampled_from([1, 2, 3]))
def test_partial_trace_preserves_trace(m, k):
    h = m + m.conj().T
    assert abs(np.trace(partial_trace(h, k)) - np.trace(h)) <= 1e-12


intmat = arrays(np.int64, st.tuples(st.integers(1, 3), st.integers(1, 3)), elements=st.integers(-5, 5))


@settings(max_examples=50, deadline=None)
@given(intmat, intmat, intmat)
def test_kron_associative(a, b, c):
    np.testing.assert_array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))

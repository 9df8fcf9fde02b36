from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contractio import linalg as la
from contractio.errors import InvalidShapeError

from conftest import random_density, random_hermitian


@given(st.integers(2, 32), st.integers(0, 2**32 - 1))
def test_norm_chain(d, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    inf, two, one = (la.schatten_norm(x, p) for p in ("inf", 2, 1))
    assert inf <= two * (1 + 1e-12) and two <= one * (1 + 1e-12)


def test_norm_chain_many_sizes(rng):
    for _ in range(1000):
        d = int(rng.integers(2, 33))
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        inf, two, one = (la.schatten_norm(x, p) for p in ("inf", 2, 1))
        assert inf <= two * (1 + 1e-12) <= one * (1 + 1e-12) ** 2


def test_schatten_two_is_frobenius(rng):
    x = rng.normal(size=(5, 5))
    assert la.schatten_norm(x, 2) == pytest.approx(np.linalg.norm(x))


@given(st.integers(0, 2**32 - 1))
def test_partial_trace_composes(seed):
    rng = np.random.default_rng(seed)
    dims = [2, 3, 2]
    a = random_density(12, rng)
    step = la.partial_trace(la.partial_trace(a, dims, [0, 1]), [2, 3], [1])
    once = la.partial_trace(a, dims, [1])
    assert np.max(np.abs(step - once)) < 1e-12


def test_partial_trace_of_product(rng):
    a, b, c = random_density(2, rng), random_density(3, rng), random_density(2, rng)
    abc = la.kron_all([a, b, c])
    assert np.allclose(la.partial_trace(abc, [2, 3, 2], [0, 2]), np.kron(a, c), atol=1e-12)
    assert np.allclose(la.partial_trace(abc, [2, 3, 2], [1]), b, atol=1e-12)
    assert la.partial_trace(abc, [2, 3, 2], []).shape == (1, 1)


def test_partial_trace_rejects_bad_dims(rng):
    with pytest.raises(InvalidShapeError):
        la.partial_trace(np.eye(6), [2, 2], [0])


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_positive_part_decomposition(d, seed):
    x = random_hermitian(d, np.random.default_rng(seed))
    recon = la.positive_part(x) - la.positive_part(-x)
    assert np.max(np.abs(recon - x)) < 1e-10
    assert la.hermitian_eigvals(la.positive_part(x))[0] >= -1e-12


def test_positive_part_of_zero_is_exactly_zero(rng):
    rho = random_density(4, rng)
    assert np.all(la.positive_part(rho - rho) == 0)


@pytest.mark.parametrize("d", [1, 2, 7, 64, 256])
def test_eigendecomposition_contract(d, rng):
    a = random_hermitian(d, rng)
    e = la.hermitian_eig(a)
    v, w = e.eigenvectors, e.eigenvalues
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - a) <= 1e-10 * max(1.0, np.linalg.norm(a))
    assert np.linalg.norm(v.conj().T @ v - np.eye(d)) < 1e-10


def test_eig_symmetrizes_drift(rng):
    a = random_hermitian(6, rng)
    drift = a + 1e-14 * (rng.normal(size=(6, 6)))
    assert np.allclose(la.hermitian_eigvals(drift), la.hermitian_eigvals(a), atol=1e-12)


def test_sqrt_psd_squares_back(rng):
    rho = random_density(5, rng, rank=2)
    s = la.sqrt_psd(rho)
    assert np.allclose(s @ s, rho, atol=1e-10)


def test_log_on_support_ignores_kernel():
    p = np.diag([0.5, 0.5, 0.0])
    log = la.log_on_support(p)
    assert np.allclose(np.diag(log), [np.log(0.5), np.log(0.5), 0.0])


def test_tensor_product_and_hermiticity(rng):
    a, b = random_hermitian(2, rng), random_hermitian(3, rng)
    ab = la.tensor_product(a, b)
    assert ab.shape == (6, 6) and la.is_hermitian(ab)
    assert not la.is_hermitian(np.array([[0, 1], [0, 0]]))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qwtails.graph import build_circulant, build_complete, build_cycle, build_petersen
from qwtails.operators import (
    SymmetryError,
    adjacency_matrix,
    jacobi_eigh,
    symmetric_eigendecomposition,
)

from oracles import char_poly_at, circulant_spectrum


def check_decomposition(a, spec, recon_tol=1e-8):
    n = len(a)
    ps = spec.projections
    assert list(spec.eigenvalues) == sorted(spec.eigenvalues, reverse=True)
    for i, p in enumerate(ps):
        assert np.max(np.abs(p - p.T)) < 1e-10
        assert np.max(np.abs(p @ p - p)) < 1e-10
        for q in ps[i + 1:]:
            assert np.max(np.abs(p @ q)) < 1e-10
    assert np.max(np.abs(sum(ps) - np.eye(n))) < 1e-10
    assert np.max(np.abs(spec.reconstruct() - a)) < recon_tol


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 11])
def test_cycle_spectrum(n):
    m = adjacency_matrix(build_cycle(n))
    spec = symmetric_eigendecomposition(m)
    expected = circulant_spectrum(n, 1)
    distinct = []
    for lam in expected:
        if not distinct or distinct[-1] - lam > 1e-9:
            distinct.append(lam)
    np.testing.assert_allclose(spec.eigenvalues, distinct, atol=1e-8)
    for lam in distinct:
        assert abs(char_poly_at(m, lam)) < 1e-8
    assert sum(spec.multiplicities) == n
    check_decomposition(m, spec)


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_complete_spectrum(n):
    spec = symmetric_eigendecomposition(adjacency_matrix(build_complete(n)))
    np.testing.assert_allclose(spec.eigenvalues, [n - 1, -1], atol=1e-8)
    assert spec.multiplicities == (1, n - 1)


def test_identity():
    spec = symmetric_eigendecomposition(np.eye(4))
    assert spec.eigenvalues == (1.0,)
    np.testing.assert_array_equal(spec.projections[0], np.eye(4))


def test_non_symmetric_rejected():
    with pytest.raises(SymmetryError):
        symmetric_eigendecomposition(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("g", [build_petersen(), build_circulant(9, 3), build_circulant(12, 5)], ids=repr)
def test_graph_spectra_against_lapack(g):
    m = adjacency_matrix(g)
    w, v = jacobi_eigh(m)
    np.testing.assert_allclose(w, np.sort(np.linalg.eigvalsh(m))[::-1], atol=1e-10)
    assert np.max(np.abs(v.T @ v - np.eye(len(m)))) < 1e-12
    assert np.max(np.abs(m @ v - v * w)) < 1e-10
    check_decomposition(m, symmetric_eigendecomposition(m))


def test_petersen_multiplicities():
    spec = symmetric_eigendecomposition(adjacency_matrix(build_petersen()))
    np.testing.assert_allclose(spec.eigenvalues, [3, 1, -2], atol=1e-10)
    assert spec.multiplicities == (1, 5, 4)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(-5, 5, allow_nan=False)))
def test_jacobi_random_symmetric(x):
    a = (x + x.T) / 2
    w, v = jacobi_eigh(a)
    scale = max(1.0, np.max(np.abs(a)))
    np.testing.assert_allclose(w, np.sort(np.linalg.eigvalsh(a))[::-1], atol=1e-10 * scale)
    assert np.max(np.abs(v.T @ v - np.eye(6))) < 1e-12
    assert np.max(np.abs(v @ np.diag(w) @ v.T - a)) < 1e-10 * scale

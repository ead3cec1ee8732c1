import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entstab.errors import IndexOutOfRange, NonHermitian
from entstab.numerics import general_eigs, hermitian_eigs, kron, partial_trace, reduced_from_vector

from conftest import X, Y, Z, I2, brute_ring, random_dm


def test_hermitian_eigs_identity():
    np.testing.assert_allclose(hermitian_eigs(np.eye(4)).eigenvalues, [1, 1, 1, 1])


def test_hermitian_eigs_diagonal_sorted_descending():
    np.testing.assert_allclose(hermitian_eigs(np.diag([3.0, 1, -2, 0])).eigenvalues, [3, 1, 0, -2])


def test_hermitian_eigs_xx():
    np.testing.assert_allclose(hermitian_eigs(np.kron(X, X)).eigenvalues, [1, 1, -1, -1], atol=1e-14)


def test_hermitian_eigs_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        hermitian_eigs(np.array([[0, 1], [0, 0]]))


def test_eigenvectors_orthonormal(rng):
    m = random_dm(rng)
    res = hermitian_eigs(m, vectors=True)
    v = res.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-9)
    np.testing.assert_allclose(m @ v, v * res.eigenvalues, atol=1e-12)


def test_trace_and_determinant_identities(rng):
    for _ in range(20):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = g + g.conj().T
        w = hermitian_eigs(h).eigenvalues
        assert abs(w.sum() - np.trace(h).real) < 1e-9
        assert abs(np.prod(w) - np.linalg.det(h).real) < 1e-8


def test_general_eigs_examples():
    d = np.diag([1, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(general_eigs(d.T @ d).eigenvalues, [1, 0.25, 0.25, 0.25])
    rot = np.array([[0, -1], [1, 0]])
    w = general_eigs(rot).eigenvalues
    np.testing.assert_allclose(sorted(w.imag), [-1, 1], atol=1e-14)
    np.testing.assert_allclose(w.real, 0, atol=1e-14)
    # g R^T g R for the Bell R-matrix diag(1, 1, -1, 1)
    g = np.diag([1, -1, -1, -1.0])
    r = np.diag([1, 1, -1, 1.0])
    np.testing.assert_allclose(general_eigs(g @ r.T @ g @ r).eigenvalues, [1, 1, 1, 1])


def test_kron_examples():
    np.testing.assert_array_equal(kron(I2, I2), np.eye(4))
    np.testing.assert_array_equal(kron(Z, Z), np.diag([1, -1, -1, 1]))
    anti = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
    np.testing.assert_array_equal(kron(Y, Y), anti)


def _c2(draw):
    return draw(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))


@st.composite
def mat2(draw):
    return np.array([[_c2(draw) for _ in range(2)] for _ in range(2)])


@settings(max_examples=60, deadline=None)
@given(mat2(), mat2(), mat2(), mat2())
def test_kron_mixed_product(a, b, c, d):
    np.testing.assert_allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-12, rtol=0)


def test_partial_trace_product_state():
    n = 4
    rho = np.zeros((2**n, 2**n))
    rho[0, 0] = 1
    expect = np.zeros((4, 4))
    expect[0, 0] = 1
    np.testing.assert_array_equal(partial_trace(rho, (0, 1)), expect)


def test_partial_trace_maximally_mixed():
    rho = np.eye(64) / 64
    for keep in [(0, 1), (2, 5), (4, 1)]:
        np.testing.assert_allclose(partial_trace(rho, keep), np.eye(4) / 4, atol=1e-15)


def test_partial_trace_of_product_returns_factor(rng):
    a = random_dm(rng)
    b = np.diag(rng.dirichlet(np.ones(8))).astype(complex)
    np.testing.assert_allclose(partial_trace(np.kron(a, b), (0, 1)), a, atol=1e-12)
    # kept sites in reversed order swap the factors
    swap = np.eye(4)[[0, 2, 1, 3]]
    np.testing.assert_allclose(partial_trace(np.kron(a, b), (1, 0)), swap @ a @ swap, atol=1e-12)


def test_partial_trace_preserves_trace_and_hermiticity(rng):
    g = rng.normal(size=(32, 32)) + 1j * rng.normal(size=(32, 32))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    red = partial_trace(rho, (1, 3))
    assert abs(np.trace(red) - 1) < 1e-12
    np.testing.assert_allclose(red, red.conj().T, atol=1e-15)


def test_partial_trace_heisenberg_pair_is_x_shaped():
    w, v = np.linalg.eigh(brute_ring(1.0, 4))
    g = v[:, 0]
    red = partial_trace(np.outer(g, g.conj()), (0, 1))
    mask = np.array([[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]], dtype=bool)
    assert np.max(np.abs(red[~mask])) < 1e-12
    assert abs(red[0, 0] - red[3, 3]) < 1e-12
    assert abs(red[1, 1] - red[2, 2]) < 1e-12
    np.testing.assert_allclose(reduced_from_vector(g, (0, 1)), red, atol=1e-14)


def test_partial_trace_bad_indices():
    with pytest.raises(IndexOutOfRange):
        partial_trace(np.eye(16) / 16, (0, 4))
    with pytest.raises(IndexOutOfRange):
        partial_trace(np.eye(16) / 16, (1, 1))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urlab.errors import InputError, NotPSDError
from urlab.linalg import (
    batched_determinant,
    char_coeffs,
    determinant,
    hermitian_sqrt,
    is_hermitian,
    is_psd,
    principal_minor,
    principal_minors,
)
from urlab.states import random_density, random_hermitian

from conftest import leibniz_det, random_complex

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_determinant_identity():
    assert determinant(np.eye(3)) == 1


def test_determinant_diagonal():
    assert determinant(np.diag([1.0, 2.0, 3.0])) == pytest.approx(6)


def test_determinant_dim_one_is_exact():
    assert determinant([[0.1 + 0.3j]]) == 0.1 + 0.3j


def test_determinant_singular():
    m = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=complex)
    assert abs(determinant(m)) < 1e-14
    assert determinant(np.zeros((3, 3))) == 0


def test_determinant_matches_eigenvalue_product():
    h = random_hermitian(5, 3)
    scale = np.linalg.norm(h, 2) ** 5
    assert abs(determinant(h) - np.prod(np.linalg.eigvalsh(h))) <= 1e-10 * scale


@given(seeds, st.integers(2, 5))
@settings(max_examples=50, deadline=None)
def test_determinant_matches_leibniz(seed, n):
    m = random_complex(np.random.default_rng(seed), n)
    assert determinant(m) == pytest.approx(leibniz_det(m), rel=1e-10, abs=1e-10)


def test_batched_determinant_shapes(rng):
    stack = random_complex(rng, 12, 3).reshape(4, 3, 3)
    dets = batched_determinant(stack)
    assert dets.shape == (4,)
    np.testing.assert_allclose(dets, np.linalg.det(stack), rtol=1e-12)


def test_batched_determinant_needs_pivoting():
    m = np.array([[0, 1], [1, 0]], dtype=complex)
    assert batched_determinant(m) == -1


@pytest.mark.parametrize(
    "matrix, idx, expected",
    [
        ([[2, 1], [1, 2]], (0, 1), 3),
        ([[1, 2, 0], [2, 5, 1], [0, 1, 3]], (0, 1), 1),
        ([[1, 2, 0], [2, 5, 1], [0, 1, 3]], (1, 2), 14),
        ([[1, 2, 0], [2, 5, 1], [0, 1, 3]], (0, 2), 3),
    ],
)
def test_principal_minor_values(matrix, idx, expected):
    sub = np.asarray(matrix)[np.ix_(idx, idx)]
    assert leibniz_det(sub) == expected
    assert principal_minor(matrix, idx) == pytest.approx(expected)


def test_order_one_minors_are_diagonal(rng):
    m = random_complex(rng, 4)
    for i in range(4):
        assert principal_minor(m, [i]) == m[i, i]


@pytest.mark.parametrize("idx", [(), (0, 0), (1, 0), (0, 3), (-1,)])
def test_principal_minor_bad_indices(idx):
    with pytest.raises(InputError):
        principal_minor(np.eye(3), idx)


def test_char_coeffs_diagonal():
    np.testing.assert_allclose(char_coeffs(np.diag([1, 2, 3])), [6, 11, 6])


def test_char_coeffs_identity():
    np.testing.assert_allclose(char_coeffs(np.eye(4)), [4, 6, 4, 1])
    np.testing.assert_allclose(char_coeffs(np.eye(4), method="eigen"), [4, 6, 4, 1])


def test_char_coeffs_routes_agree_on_hermitian():
    h = random_hermitian(4, 11)
    a = char_coeffs(h, "minors")
    b = char_coeffs(h, "eigen")
    np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-10 * np.abs(b).max())


def test_char_coeffs_unknown_method():
    with pytest.raises(InputError):
        char_coeffs(np.eye(2), method="nope")


@given(seeds, st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_char_coeffs_match_characteristic_polynomial(seed, n):
    # det(t I - M) = t^n - C_1 t^(n-1) + C_2 t^(n-2) - ...
    m = random_complex(np.random.default_rng(seed), n)
    poly = np.poly(m)
    expected = [(-1) ** r * poly[r] for r in range(1, n + 1)]
    scale = max(1.0, np.linalg.norm(m, 2)) ** n
    np.testing.assert_allclose(char_coeffs(m), expected, atol=1e-10 * scale)


@given(seeds, st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_char_coeffs_similarity_invariant(seed, n):
    rng = np.random.default_rng(seed)
    h = random_hermitian(n, rng)
    t = np.eye(n) + 0.3 * random_complex(rng, n)
    moved = t @ h @ np.linalg.inv(t)
    scale = max(1.0, np.linalg.norm(h, 2)) ** n * np.linalg.cond(t)
    np.testing.assert_allclose(char_coeffs(moved), char_coeffs(h), atol=1e-10 * scale)


@given(seeds, st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_psd_minors_and_coeffs_nonnegative(seed, n):
    rng = np.random.default_rng(seed)
    g = random_complex(rng, n, n + 1)
    gram = g @ g.conj().T
    scale = max(1.0, np.linalg.norm(gram, 2)) ** n
    for r in range(1, n + 1):
        _, minors = principal_minors(gram, r)
        assert np.all(minors.real >= -1e-10 * scale)
    assert np.all(char_coeffs(gram).real >= -1e-10 * scale)


@given(seeds, st.integers(1, 5))
@settings(max_examples=40, deadline=None)
def test_determinant_is_top_coefficient(seed, n):
    m = random_complex(np.random.default_rng(seed), n)
    assert char_coeffs(m)[-1] == determinant(m)


def test_hermitian_sqrt_diagonal():
    np.testing.assert_allclose(hermitian_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]), atol=1e-15)


def test_hermitian_sqrt_projector():
    psi = np.array([1, 1j, 0]) / np.sqrt(2)
    proj = np.outer(psi, psi.conj())
    np.testing.assert_allclose(hermitian_sqrt(proj), proj, atol=1e-14)


def test_hermitian_sqrt_reconstructs_density():
    rho = random_density(5, 5, 17).matrix
    q = hermitian_sqrt(rho)
    assert is_hermitian(q)
    assert np.linalg.eigvalsh(q)[0] >= 0
    np.testing.assert_allclose(q @ q, rho, atol=1e-10 * np.trace(rho).real)


def test_hermitian_sqrt_clamps_roundoff():
    rho = np.diag([1.0, -1e-13])
    np.testing.assert_allclose(hermitian_sqrt(rho), np.diag([1.0, 0.0]))


def test_hermitian_sqrt_rejects_indefinite():
    with pytest.raises(NotPSDError):
        hermitian_sqrt(np.diag([1.0, -0.1]))


def test_is_psd():
    assert is_psd(np.diag([1.0, 0.0]))
    assert not is_psd(np.diag([1.0, -1.0]))
    assert not is_psd(np.array([[1, 1], [0, 1]]))

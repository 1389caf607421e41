import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urlab.errors import DimensionMismatchError, HermiticityError, InputError
from urlab.linalg import CLAMP_RTOL, is_hermitian
from urlab.states import (
    DensityMatrix,
    OperatorSet,
    PureState,
    fock_state,
    make_rng,
    number_op,
    quadratures,
    random_density,
    random_hermitian,
    random_operator,
    random_pure,
    spin_ops,
)
from urlab.uncertainty import GramPath, covariance_matrix, gram_robertson, mean, split_sk

seeds = st.integers(min_value=0, max_value=2**32 - 1)

QP_VACUUM_GAMMA = np.array([[0.5, 0.5j], [-0.5j, 0.5]])


def test_mean_examples():
    assert mean(number_op(10), fock_state(3, 10)) == pytest.approx(3)
    q, _ = quadratures(6)
    assert mean(q, fock_state(0, 6)) == 0
    jz = spin_ops(1)[2]
    assert mean(jz, DensityMatrix.maximally_mixed(2)) == 0


def test_mean_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        mean(np.eye(3), fock_state(0, 2))


def test_pure_gram_vacuum_quadratures():
    # q|0> = |1>/sqrt2, p|0> = i|1>/sqrt2, so <q0|p0> = i/2
    q, p = quadratures(20)
    data = gram_robertson([q, p], fock_state(0, 20), GramPath.PURE_GRAM)
    np.testing.assert_allclose(data.gamma, QP_VACUUM_GAMMA, atol=1e-15)
    np.testing.assert_allclose(data.means, [0, 0])
    assert data.n == 2


def test_mixed_trace_spin_half_maximally_mixed():
    jx, jy, _ = spin_ops(1)
    data = gram_robertson([jx, jy], DensityMatrix.maximally_mixed(2), GramPath.MIXED_TRACE)
    np.testing.assert_allclose(data.gamma, np.diag([0.25, 0.25]), atol=1e-15)
    np.testing.assert_array_equal(data.k_part, 0)


@pytest.mark.parametrize("path", [GramPath.MIXED_TRACE, GramPath.MIXED_HS])
def test_pure_projector_reduces_to_pure_gram(path):
    ops = OperatorSet([random_operator(5, s) for s in range(3)])
    psi = random_pure(5, 99)
    pure = gram_robertson(ops, psi, GramPath.PURE_GRAM).gamma
    mixed = gram_robertson(ops, psi.to_density(), path).gamma
    tol = 1e-12 if path is GramPath.MIXED_TRACE else 1e-10
    np.testing.assert_allclose(mixed, pure, atol=tol * max(1, np.abs(pure).max()))


def test_default_paths():
    ops = [random_hermitian(3, 1)]
    assert gram_robertson(ops, random_pure(3, 1)).path is GramPath.PURE_GRAM
    assert gram_robertson(ops, random_density(3, 2, 1)).path is GramPath.MIXED_TRACE
    assert gram_robertson(ops, random_pure(3, 1), "mixed_hs").path is GramPath.MIXED_HS


def test_pure_gram_rejects_density():
    with pytest.raises(InputError):
        gram_robertson([np.eye(2)], DensityMatrix.maximally_mixed(2), GramPath.PURE_GRAM)


def test_gram_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        gram_robertson([np.eye(3)], fock_state(0, 2))


def test_split_sk_examples():
    s, k = split_sk(QP_VACUUM_GAMMA)
    np.testing.assert_array_equal(s, np.diag([0.5, 0.5]))
    np.testing.assert_array_equal(k, [[0, 0.5], [-0.5, 0]])
    s, k = split_sk(np.array([[2.0, 1.0], [1.0, 3.0]]))
    np.testing.assert_array_equal(k, 0)


def test_split_sk_reconstructs_exactly():
    g = random_operator(4, 5)
    gamma = g @ g.conj().T
    s, k = split_sk(gamma)
    np.testing.assert_array_equal(s + 1j * k, gamma)


def test_split_sk_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        split_sk(np.array([[1, 2], [0, 1]]))


def test_covariance_vacuum():
    q, p = quadratures(20)
    sigma, kappa = covariance_matrix([q, p], fock_state(0, 20))
    np.testing.assert_allclose(sigma, np.diag([0.5, 0.5]), atol=1e-15)
    np.testing.assert_allclose(kappa, [[0, 0.5], [-0.5, 0]], atol=1e-15)


def test_covariance_fock_one():
    # var(q) = var(p) = n + 1/2 in a number state
    q, p = quadratures(20)
    sigma, kappa = covariance_matrix([q, p], fock_state(1, 20))
    np.testing.assert_allclose(sigma, np.diag([1.5, 1.5]), atol=1e-14)
    np.testing.assert_allclose(kappa, [[0, 0.5], [-0.5, 0]], atol=1e-15)


def test_covariance_spin_up():
    # sigma_k^2 = 1, <sigma_x> = <sigma_y> = 0, <sigma_z> = 1 on |up>; [Jx, Jy] = i Jz
    sigma, kappa = covariance_matrix(spin_ops(1), fock_state(0, 2))
    np.testing.assert_allclose(sigma, np.diag([0.25, 0.25, 0]), atol=1e-15)
    assert kappa[0, 1] == pytest.approx(0.25)
    assert kappa[0, 2] == 0 and kappa[1, 2] == 0
    np.testing.assert_array_equal(kappa, -kappa.T)


def test_covariance_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        covariance_matrix([random_operator(3, 0)], fock_state(0, 3))


def _random_case(seed, hermitian=False, mixed=True, max_dim=16, max_ops=4):
    rng = make_rng(seed)
    dim = int(rng.integers(2, max_dim + 1))
    n = int(rng.integers(1, max_ops + 1))
    draw = random_hermitian if hermitian else random_operator
    ops = OperatorSet([draw(dim, rng) for _ in range(n)])
    state = random_density(dim, int(rng.integers(1, dim + 1)), rng) if mixed else random_pure(dim, rng)
    return ops, state


@given(seeds, st.sampled_from(list(GramPath)))
@settings(max_examples=80, deadline=None)
def test_gram_hermitian_psd(seed, path):
    ops, state = _random_case(seed, mixed=path is not GramPath.PURE_GRAM)
    gamma = gram_robertson(ops, state, path).gamma
    assert is_hermitian(gamma, 1e-12)
    evals = np.linalg.eigvalsh((gamma + gamma.conj().T) / 2)
    assert evals[0] >= -CLAMP_RTOL * max(1.0, np.trace(gamma).real)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_mixed_trace_equals_mixed_hs(seed):
    ops, rho = _random_case(seed)
    a = gram_robertson(ops, rho, GramPath.MIXED_TRACE).gamma
    b = gram_robertson(ops, rho, GramPath.MIXED_HS).gamma
    assert np.max(np.abs(a - b)) <= 1e-10


@given(seeds, st.booleans())
@settings(max_examples=80, deadline=None)
def test_covariance_equals_gram_split(seed, mixed):
    ops, state = _random_case(seed, hermitian=True, mixed=mixed, max_dim=8)
    sigma, kappa = covariance_matrix(ops, state)
    data = gram_robertson(ops, state)
    np.testing.assert_allclose(sigma, data.s_part, atol=1e-10)
    np.testing.assert_allclose(kappa, data.k_part, atol=1e-10)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_nonhermitian_gram_from_hermitian_components(seed):
    # Z_j = X_j + i Y_j: Gamma_jk = R(X_j,X_k) + R(Y_j,Y_k) + i R(X_j,Y_k) - i R(Y_j,X_k)
    # with R = sigma + i kappa over the 2n Hermitian components
    ops, state = _random_case(seed, max_dim=8, max_ops=3)
    n = len(ops)
    xs = [(z + z.conj().T) / 2 for z in ops]
    ys = [(z - z.conj().T) / 2j for z in ops]
    sigma, kappa = covariance_matrix(xs + ys, state)
    r = sigma + 1j * kappa
    expected = r[:n, :n] + r[n:, n:] + 1j * r[:n, n:] - 1j * r[n:, :n]
    np.testing.assert_allclose(gram_robertson(ops, state).gamma, expected, atol=1e-10)


def test_uncertainty_data_reconstruction():
    ops, state = _random_case(3)
    data = gram_robertson(ops, state)
    assert np.max(np.abs(data.gamma - (data.s_part + 1j * data.k_part))) <= 1e-12
    np.testing.assert_allclose(data.s_part, data.s_part.T, atol=1e-12)
    np.testing.assert_allclose(data.k_part, -data.k_part.T, atol=1e-12)
    assert isinstance(state, DensityMatrix) and not isinstance(state, PureState)

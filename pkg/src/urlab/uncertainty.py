"""Robertson/Gram matrices and their real symmetric and antisymmetric parts.

For operators ``Z_1, ..., Z_n`` and a state, the Gram matrix is

    Gamma_jk = Tr[(Z_k - <Z_k>) rho (Z_j^H - <Z_j>^*)],

which for a pure state is the matrix of inner products of the shifted vectors
``(Z_j - <Z_j>)|psi>``. Its real part ``S`` generalises the covariance matrix
and its imaginary part ``K`` generalises the mean-commutator matrix.

Three construction paths are provided and are expected to agree in finite
dimension. :func:`covariance_matrix` is a fourth, independent path for
Hermitian sets that forms the operator products ``X_j X_k`` explicitly. Only
the Gram paths avoid products of operators, which is why they remain
meaningful when a state lies in the domain of each ``X_j`` but not of the
products (see :mod:`urlab.grid`).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError, HermiticityError, InputError
from .linalg import as_matrix, hermitian_sqrt, is_hermitian
from .states import OperatorSet, PureState, State, as_state

__all__ = [
    "GramPath",
    "UncertaintyData",
    "mean",
    "means",
    "gram_robertson",
    "split_sk",
    "covariance_matrix",
]


class GramPath(str, Enum):
    PURE_GRAM = "pure_gram"
    MIXED_TRACE = "mixed_trace"
    MIXED_HS = "mixed_hs"


@dataclass(frozen=True, eq=False)
class UncertaintyData:
    """Gram matrix ``gamma = s_part + 1j * k_part`` with the operator means."""

    gamma: np.ndarray
    s_part: np.ndarray
    k_part: np.ndarray
    means: np.ndarray
    path: GramPath

    @property
    def n(self) -> int:
        return self.gamma.shape[0]


def _check_dim(dim: int, state: State) -> None:
    if state.dim != dim:
        raise DimensionMismatchError(f"operator dim {dim} does not match state dim {state.dim}")


def mean(op, state) -> complex:
    """``<psi|op|psi>`` for a pure state, ``Tr(op rho)`` for a density matrix."""
    op = as_matrix(op, "operator")
    state = as_state(state)
    _check_dim(op.shape[0], state)
    if isinstance(state, PureState):
        psi = state.amplitudes
        return complex(np.vdot(psi, op @ psi))
    return complex(np.sum(op * state.matrix.T))


def means(ops: OperatorSet, state: State) -> np.ndarray:
    ops = OperatorSet.coerce(ops)
    return np.array([mean(op, state) for op in ops])


def split_sk(gamma, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts ``(S, K)`` of a Hermitian matrix."""
    gamma = as_matrix(gamma, "gamma")
    if not is_hermitian(gamma, tol):
        raise HermiticityError("split_sk requires a Hermitian matrix")
    return gamma.real.copy(), gamma.imag.copy()


def _pure_gram(ops: OperatorSet, psi: np.ndarray, mu: np.ndarray) -> np.ndarray:
    # columns are (Z_j - <Z_j>)|psi>; no operator products are formed
    chi = np.stack([op @ psi - m * psi for op, m in zip(ops, mu)], axis=1)
    return chi.conj().T @ chi


def _mixed_trace(ops: OperatorSet, rho: np.ndarray, mu: np.ndarray) -> np.ndarray:
    eye = np.eye(rho.shape[0])
    shifted = np.stack([op - m * eye for op, m in zip(ops, mu)])
    right = shifted @ rho                      # (Z_k - <Z_k>) rho
    left = shifted.conj().transpose(0, 2, 1)   # Z_j^H - <Z_j>^*
    # Tr[A_k B_j] = sum_ab A_k[a, b] B_j[b, a]
    return np.einsum("kab,jba->jk", right, left)


def _mixed_hs(ops: OperatorSet, rho: np.ndarray, mu: np.ndarray) -> np.ndarray:
    root = hermitian_sqrt(rho)
    eye = np.eye(rho.shape[0])
    tilde = np.stack([(op - m * eye) @ root for op, m in zip(ops, mu)])
    # (A, B)_HS = Tr(B A^H) = sum conj(A) * B, entry (j, k) pairs tilde_j with tilde_k
    return np.einsum("jab,kab->jk", tilde.conj(), tilde)


def gram_robertson(ops, state, path: GramPath | str | None = None) -> UncertaintyData:
    """Gram matrix of the shifted operators in ``state``.

    Parameters
    ----------
    ops : OperatorSet or sequence of matrices
        Operators, Hermitian or not.
    state : PureState, DensityMatrix or array
        The state. Pure states are promoted to projectors for the mixed paths.
    path : GramPath, optional
        ``PURE_GRAM`` (default for pure states) builds inner products of the
        shifted vectors. ``MIXED_TRACE`` (default for density matrices)
        evaluates the trace formula. ``MIXED_HS`` pairs the matrices
        ``(Z_j - <Z_j>) sqrt(rho)`` under the Hilbert-Schmidt product.

    Returns
    -------
    UncertaintyData
    """
    ops = OperatorSet.coerce(ops)
    state = as_state(state)
    _check_dim(ops.dim, state)
    if path is None:
        path = GramPath.PURE_GRAM if isinstance(state, PureState) else GramPath.MIXED_TRACE
    path = GramPath(path)
    mu = means(ops, state)
    if path is GramPath.PURE_GRAM:
        if not isinstance(state, PureState):
            raise InputError("PURE_GRAM path requires a pure state")
        gamma = _pure_gram(ops, state.amplitudes, mu)
    else:
        rho = state.projector() if isinstance(state, PureState) else state.matrix
        gamma = _mixed_trace(ops, rho, mu) if path is GramPath.MIXED_TRACE else _mixed_hs(ops, rho, mu)
    s, k = split_sk(gamma)
    return UncertaintyData(gamma=gamma, s_part=s, k_part=k, means=mu, path=path)


def covariance_matrix(ops, state) -> tuple[np.ndarray, np.ndarray]:
    """Uncertainty matrix ``sigma`` and mean-commutator matrix ``kappa``.

    ``sigma_jk = <X_j X_k + X_k X_j>/2 - <X_j><X_k>`` and
    ``kappa_jk = (-i/2) <[X_j, X_k]>``, both from explicit operator products.
    Valid only when the state is in the domain of every product, which is
    automatic in finite dimension.
    """
    ops = OperatorSet.coerce(ops)
    if not ops.all_hermitian:
        raise HermiticityError("covariance_matrix requires Hermitian operators")
    state = as_state(state)
    _check_dim(ops.dim, state)
    mu = means(ops, state).real
    n = len(ops)
    sigma = np.empty((n, n))
    kappa = np.empty((n, n))
    for j in range(n):
        for k in range(j, n):
            xy = ops[j] @ ops[k]
            yx = ops[k] @ ops[j]
            sigma[j, k] = sigma[k, j] = (mean(xy + yx, state) / 2).real - mu[j] * mu[k]
            kappa[j, k] = (-0.5j * mean(xy - yx, state)).real
            kappa[k, j] = -kappa[j, k]
    return sigma, kappa


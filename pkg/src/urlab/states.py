"""States and operator sets on finite-dimensional Hilbert spaces.

Conventions: hbar = 1, ``a = (q + i p) / sqrt(2)`` so that ``[q, p] = i`` away
from the truncation edge and vacuum quadrature variances are 1/2. Fock labels
run ``|0>, ..., |dim-1>``; modes in :func:`embed` are 0-based.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce
from math import lgamma
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, HermiticityError, InputError, NotPSDError
from .linalg import CLAMP_RTOL, as_matrix, is_hermitian

__all__ = [
    "PureState",
    "DensityMatrix",
    "OperatorSet",
    "State",
    "TruncationWarning",
    "as_state",
    "annihilation_op",
    "creation_op",
    "number_op",
    "quadratures",
    "spin_ops",
    "fock_state",
    "coherent_state",
    "tensor",
    "embed",
    "make_rng",
    "derive_seed",
    "random_pure",
    "random_density",
    "random_hermitian",
    "random_operator",
]

NORM_TOL = 1e-12


class TruncationWarning(UserWarning):
    """A state occupies Fock levels too close to the truncation edge."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalised amplitude vector.

    ``notes`` carries non-fatal diagnostics such as ``"truncation"`` from
    :func:`coherent_state`.
    """

    amplitudes: np.ndarray
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise DimensionMismatchError(f"amplitudes must be a non-empty vector, got shape {amps.shape}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InputError(f"state is not normalised (squared norm {norm2!r})")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def from_vector(cls, vec, notes: tuple[str, ...] = ()) -> "PureState":
        """Normalise ``vec`` and wrap it."""
        vec = np.asarray(vec, dtype=complex)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InputError("cannot normalise the zero vector")
        return cls(vec / norm, notes)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.projector())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, "density matrix")
        if not is_hermitian(m, NORM_TOL):
            raise HermiticityError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > NORM_TOL:
            raise InputError(f"density matrix trace is {tr!r}, expected 1")
        evals = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if evals[0] < -CLAMP_RTOL:
            raise NotPSDError(f"density matrix is not positive semidefinite (eigenvalue {evals[0]:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)


State = Union[PureState, DensityMatrix]


def as_state(state) -> State:
    """Coerce arrays to states: 1-D arrays are pure, 2-D are density matrices."""
    if isinstance(state, (PureState, DensityMatrix)):
        return state
    arr = np.asarray(state)
    if arr.ndim == 1:
        return PureState(arr)
    if arr.ndim == 2:
        return DensityMatrix(arr)
    raise InputError(f"cannot interpret array of shape {arr.shape} as a state")


class OperatorSet(Sequence):
    """Ordered list of same-dimension operators with per-operator Hermitian flags.

    When ``hermitian`` is omitted the flags are inferred from the entries;
    when given, each flag must agree with the entries within 1e-12.
    """

    def __init__(self, operators, hermitian: Sequence[bool] | None = None, names: Sequence[str] | None = None):
        ops = tuple(_frozen(as_matrix(op, "operator")) for op in operators)
        if not ops:
            raise InputError("operator set must be non-empty")
        dims = {op.shape[0] for op in ops}
        if len(dims) != 1:
            raise DimensionMismatchError(f"operators have differing dimensions {sorted(dims)}")
        actual = tuple(is_hermitian(op, NORM_TOL) for op in ops)
        if hermitian is None:
            flags = actual
        else:
            flags = tuple(bool(f) for f in hermitian)
            if len(flags) != len(ops):
                raise InputError("one Hermitian flag is needed per operator")
            for i, (f, a) in enumerate(zip(flags, actual)):
                if f != a:
                    label = names[i] if names else i
                    raise HermiticityError(
                        f"operator {label} flagged hermitian={f} but its entries say otherwise"
                    )
        self.operators = ops
        self.hermitian_flags = flags
        self.names = tuple(names) if names is not None else tuple(f"Z{i + 1}" for i in range(len(ops)))

    @classmethod
    def coerce(cls, ops) -> "OperatorSet":
        return ops if isinstance(ops, OperatorSet) else cls(ops)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return OperatorSet(self.operators[i], self.hermitian_flags[i], self.names[i])
        return self.operators[i]

    def __len__(self) -> int:
        return len(self.operators)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @property
    def all_hermitian(self) -> bool:
        return all(self.hermitian_flags)

    def __repr__(self) -> str:
        return f"OperatorSet(n={len(self)}, dim={self.dim}, hermitian={self.hermitian_flags})"


# --- Fock space ------------------------------------------------------------


def annihilation_op(dim: int) -> np.ndarray:
    """Truncated boson annihilation operator, ``a|n> = sqrt(n)|n-1>``."""
    if dim < 2:
        raise InputError(f"Fock truncation needs dim >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def creation_op(dim: int) -> np.ndarray:
    return annihilation_op(dim).conj().T


def number_op(dim: int) -> np.ndarray:
    if dim < 1:
        raise InputError(f"dim must be >= 1, got {dim}")
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian ``(q, p)`` with ``a = (q + i p) / sqrt(2)``."""
    a = annihilation_op(dim)
    ad = a.conj().T
    return (a + ad) / np.sqrt(2), (a - ad) / (1j * np.sqrt(2))


def spin_ops(two_j: int) -> OperatorSet:
    """``(J_x, J_y, J_z)`` for spin ``j = two_j / 2`` in the ``|j, m>`` basis, m descending."""
    if two_j < 1:
        raise InputError(f"two_j must be >= 1, got {two_j}")
    j = two_j / 2
    m = j - np.arange(two_j + 1)
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); row index of m+1 is one above m
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return OperatorSet([jx, jy, jz], names=["Jx", "Jy", "Jz"])


def fock_state(n: int, dim: int) -> PureState:
    if not 0 <= n < dim:
        raise InputError(f"Fock level {n} outside 0..{dim - 1}")
    vec = np.zeros(dim, dtype=complex)
    vec[n] = 1
    return PureState(vec)


def coherent_state(alpha: complex, dim: int) -> PureState:
    """Truncated coherent state, amplitudes ``alpha**n / sqrt(n!)`` renormalised.

    If ``|alpha|**2 > dim / 4`` a :class:`TruncationWarning` is issued and the
    state carries the note ``"truncation"``.
    """
    if dim < 1:
        raise InputError(f"dim must be >= 1, got {dim}")
    alpha = complex(alpha)
    notes: tuple[str, ...] = ()
    if abs(alpha) ** 2 > dim / 4:
        warnings.warn(
            f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds dim/4 = {dim / 4:.3g}; truncation is significant",
            TruncationWarning,
            stacklevel=2,
        )
        notes = ("truncation",)
    n = np.arange(dim)
    if alpha == 0:
        amps = (n == 0).astype(complex)
    else:
        # log-space keeps alpha**n / sqrt(n!) finite for large dim
        logmag = n * np.log(abs(alpha)) - 0.5 * np.array([lgamma(k + 1) for k in n])
        amps = np.exp(logmag - logmag.max()) * np.exp(1j * np.angle(alpha) * n)
    return PureState.from_vector(amps, notes)


# --- composite systems -----------------------------------------------------


def tensor(*factors) -> np.ndarray:
    """Kronecker product of matrices or vectors, left factor outermost."""
    if not factors:
        raise InputError("tensor needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def embed(op, mode_index: int, mode_dims: Sequence[int]) -> np.ndarray:
    """Place ``op`` on tensor factor ``mode_index`` with identities elsewhere."""
    op = as_matrix(op, "operator")
    mode_dims = [int(d) for d in mode_dims]
    if not 0 <= mode_index < len(mode_dims):
        raise InputError(f"mode index {mode_index} outside 0..{len(mode_dims) - 1}")
    if op.shape[0] != mode_dims[mode_index]:
        raise DimensionMismatchError(
            f"operator has dim {op.shape[0]} but mode {mode_index} has dim {mode_dims[mode_index]}"
        )
    factors = [op if k == mode_index else np.eye(d) for k, d in enumerate(mode_dims)]
    return tensor(*factors)


# --- random ensembles ------------------------------------------------------


def derive_seed(seed: int, *keys: int) -> np.random.SeedSequence:
    """Hash ``(seed, *keys)`` into an independent seed sequence.

    Trial ``t`` of a campaign uses ``derive_seed(seed, t)``, so serial and
    parallel runs draw identical inputs.
    """
    return np.random.SeedSequence([int(seed), *(int(k) for k in keys)])


def make_rng(seed) -> np.random.Generator:
    """Accept an int, a SeedSequence or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_pure(dim: int, seed) -> PureState:
    """Haar-random pure state (normalised complex Gaussian vector)."""
    rng = make_rng(seed)
    return PureState.from_vector(_ginibre(rng, dim, 1)[:, 0])


def random_density(dim: int, rank: int, seed) -> DensityMatrix:
    """Ginibre-induced density matrix ``G G^H / tr(G G^H)`` with ``G`` of shape (dim, rank)."""
    if not 1 <= rank <= dim:
        raise InputError(f"rank must be in 1..{dim}, got {rank}")
    g = _ginibre(make_rng(seed), dim, rank)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real)


def random_hermitian(dim: int, seed) -> np.ndarray:
    g = _ginibre(make_rng(seed), dim, dim)
    return (g + g.conj().T) / 2


def random_operator(dim: int, seed) -> np.ndarray:
    return _ginibre(make_rng(seed), dim, dim)

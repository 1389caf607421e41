"""Uncertainty relations evaluated as ``lhs >= rhs`` verdicts.

Every checker returns :class:`URVerdict` objects carrying both sides, the
margin ``lhs - rhs`` and a pass flag ``margin >= -tol * scale`` with
``scale = max(1, |lhs|, |rhs|)``.

Two layers are exposed. The ``*_verdict`` functions take precomputed
matrices (sigma, kappa, Gram matrices) and are what the fuzz driver uses to
avoid recomputation. The ``check_*`` functions take operators and states.

For Hermitian operator sets the symmetric/antisymmetric pair is the
covariance matrix and the mean-commutator matrix built from explicit
products; for non-Hermitian sets it is the ``(S, K)`` split of the Gram
matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, HermiticityError, InputError, NotPSDError
from .linalg import as_matrix, char_coeffs, determinant, is_hermitian, is_psd, principal_minor
from .states import OperatorSet, State, annihilation_op, as_state, embed
from .uncertainty import covariance_matrix, gram_robertson

__all__ = [
    "DEFAULT_TOL",
    "Relation",
    "URVerdict",
    "TwoModeResult",
    "robertson_verdict",
    "schrodinger_verdict",
    "char_ur_verdict",
    "superadditivity_verdict",
    "minor_verdicts",
    "sheur_verdict",
    "symmetric_parts",
    "check_robertson",
    "check_schrodinger",
    "check_char_ur_multistate",
    "check_gram_superadditivity",
    "check_minor_urs",
    "check_entangled_pair",
    "check_two_mode_new_ur",
    "quadrature_moments",
]

DEFAULT_TOL = 1e-10


class Relation(str, Enum):
    RUR = "RUR"
    SUR = "SUR"
    EUR1 = "EUR1"
    EUR2 = "EUR2"
    MINOR_SIGMA_KAPPA = "MINOR_SIGMA_KAPPA"
    MINOR_GRAM_SUPERADD = "MINOR_GRAM_SUPERADD"
    SHEUR = "SHEUR"
    NEWUR = "NEWUR"
    DETS_DETK = "DETS_DETK"


@dataclass(frozen=True)
class URVerdict:
    """Outcome of one inequality check.

    ``indices`` are 0-based in Python; the dict form (reports) is 1-based to
    match problem files.
    """

    relation: Relation
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tol: float = DEFAULT_TOL
    order: int | None = None
    indices: tuple[int, ...] | None = None

    @classmethod
    def evaluate(cls, relation, lhs, rhs, tol: float = DEFAULT_TOL, order=None, indices=None) -> "URVerdict":
        lhs, rhs = float(lhs), float(rhs)
        margin = lhs - rhs
        scale = max(1.0, abs(lhs), abs(rhs))
        passed = bool(np.isfinite(margin) and margin >= -tol * scale)
        return cls(
            Relation(relation),
            lhs,
            rhs,
            margin,
            passed,
            float(tol),
            None if order is None else int(order),
            None if indices is None else tuple(int(i) for i in indices),
        )

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.lhs), abs(self.rhs))

    @property
    def scaled_margin(self) -> float:
        return self.margin / self.scale

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "tol": self.tol,
            "order": self.order,
            "indices": None if self.indices is None else [i + 1 for i in self.indices],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "URVerdict":
        return cls(
            Relation(d["relation"]),
            float(d["lhs"]),
            float(d["rhs"]),
            float(d["margin"]),
            bool(d["pass"]),
            float(d["tol"]),
            d.get("order"),
            None if d.get("indices") is None else tuple(i - 1 for i in d["indices"]),
        )


# --- matrix-level verdicts -------------------------------------------------


def _real_det(m) -> float:
    return determinant(m).real


def robertson_verdict(sigma, kappa, tol: float = DEFAULT_TOL) -> URVerdict:
    """``det sigma >= det kappa``."""
    return URVerdict.evaluate(Relation.RUR, _real_det(sigma), _real_det(kappa), tol, order=len(sigma))


def schrodinger_verdict(sigma, kappa, tol: float = DEFAULT_TOL) -> URVerdict:
    """2x2 blocks: ``var(X) var(Y) - cov(X,Y)^2 >= |<[X,Y]>|^2 / 4``."""
    lhs = sigma[0, 0] * sigma[1, 1] - sigma[0, 1] ** 2
    # kappa_01 = (-i/2)<[X,Y]>, so kappa_01^2 = |<[X,Y]>|^2 / 4
    rhs = kappa[0, 1] ** 2
    return URVerdict.evaluate(Relation.SUR, lhs, rhs, tol)


def char_ur_verdict(s_total, k_total, r: int, tol: float = DEFAULT_TOL) -> URVerdict:
    """``C_r(sum S) >= C_r(sum K)``."""
    n = len(s_total)
    if not 1 <= r <= n:
        raise InputError(f"order r={r} out of range 1..{n}")
    lhs = char_coeffs(s_total)[r - 1].real
    rhs = char_coeffs(k_total)[r - 1].real
    return URVerdict.evaluate(Relation.EUR1, lhs, rhs, tol, order=r)


def superadditivity_verdict(gammas: Sequence[np.ndarray], r: int, tol: float = DEFAULT_TOL) -> URVerdict:
    """``C_r(sum Gamma) >= sum C_r(Gamma)``."""
    n = len(gammas[0])
    if not 1 <= r <= n:
        raise InputError(f"order r={r} out of range 1..{n}")
    lhs = char_coeffs(np.sum(gammas, axis=0))[r - 1].real
    rhs = sum(char_coeffs(g)[r - 1].real for g in gammas)
    return URVerdict.evaluate(Relation.EUR2, lhs, rhs, tol, order=r)


def minor_verdicts(s_list, k_list, gammas, idx, tol: float = DEFAULT_TOL) -> tuple[URVerdict, URVerdict]:
    """Principal-minor relations on the index set ``idx``.

    Returns the symmetric/antisymmetric line ``M(sum S) >= M(sum K)`` and the
    Gram line ``M(sum Gamma) >= sum M(Gamma)``.
    """
    idx = tuple(idx)
    s_line = URVerdict.evaluate(
        Relation.MINOR_SIGMA_KAPPA,
        principal_minor(np.sum(s_list, axis=0), idx).real,
        principal_minor(np.sum(k_list, axis=0), idx).real,
        tol,
        order=len(idx),
        indices=idx,
    )
    g_line = URVerdict.evaluate(
        Relation.MINOR_GRAM_SUPERADD,
        principal_minor(np.sum(gammas, axis=0), idx).real,
        sum(principal_minor(g, idx).real for g in gammas),
        tol,
        order=len(idx),
        indices=idx,
    )
    return s_line, g_line


def sheur_verdict(sigma1, kappa1, sigma2, kappa2, tol: float = DEFAULT_TOL) -> URVerdict:
    """Two-state entangled relation for 2x2 blocks of two states."""
    lhs = 0.5 * (sigma1[0, 0] * sigma2[1, 1] + sigma2[0, 0] * sigma1[1, 1]) - abs(sigma1[0, 1] * sigma2[0, 1])
    # (1/4)|<[X,Y]>_1 <[X,Y]>_2| = |kappa1_01 kappa2_01|
    rhs = abs(kappa1[0, 1] * kappa2[0, 1])
    return URVerdict.evaluate(Relation.SHEUR, lhs, rhs, tol)


# --- operator/state checkers -----------------------------------------------


def _require_hermitian(ops: OperatorSet) -> None:
    if not ops.all_hermitian:
        raise HermiticityError("this relation requires Hermitian operators")


def _states(ops: OperatorSet, states) -> list[State]:
    if isinstance(states, (list, tuple)):
        out = [as_state(s) for s in states]
    else:
        out = [as_state(states)]
    if not out:
        raise InputError("at least one state is required")
    for s in out:
        if s.dim != ops.dim:
            raise DimensionMismatchError(f"state dim {s.dim} does not match operator dim {ops.dim}")
    return out


def symmetric_parts(ops: OperatorSet, state: State) -> tuple[np.ndarray, np.ndarray]:
    """``(sigma, kappa)`` for Hermitian sets, Gram ``(S, K)`` otherwise."""
    if ops.all_hermitian:
        return covariance_matrix(ops, state)
    data = gram_robertson(ops, state)
    return data.s_part, data.k_part


def check_robertson(ops, state, tol: float = DEFAULT_TOL) -> URVerdict:
    ops = OperatorSet.coerce(ops)
    _require_hermitian(ops)
    (state,) = _states(ops, state)
    return robertson_verdict(*covariance_matrix(ops, state), tol)


def check_schrodinger(x, y, state, tol: float = DEFAULT_TOL) -> URVerdict:
    ops = OperatorSet([x, y])
    _require_hermitian(ops)
    (state,) = _states(ops, state)
    return schrodinger_verdict(*covariance_matrix(ops, state), tol)


def check_char_ur_multistate(ops, states, r: int, tol: float = DEFAULT_TOL) -> URVerdict:
    """Order-``r`` characteristic relation for the summed matrices over ``states``."""
    ops = OperatorSet.coerce(ops)
    states = _states(ops, states)
    parts = [symmetric_parts(ops, s) for s in states]
    return char_ur_verdict(sum(p[0] for p in parts), sum(p[1] for p in parts), r, tol)


def check_gram_superadditivity(gammas, r: int, tol: float = DEFAULT_TOL) -> URVerdict:
    gammas = [as_matrix(g, "gamma") for g in gammas]
    if not gammas:
        raise InputError("at least one Gram matrix is required")
    if len({g.shape for g in gammas}) != 1:
        raise DimensionMismatchError("Gram matrices have differing sizes")
    for i, g in enumerate(gammas):
        if not is_hermitian(g, tol) or not is_psd(g, tol):
            raise NotPSDError(f"Gram matrix {i} is not Hermitian positive semidefinite")
    return superadditivity_verdict(gammas, r, tol)


def check_minor_urs(ops, states, idx, tol: float = DEFAULT_TOL) -> tuple[URVerdict, URVerdict]:
    ops = OperatorSet.coerce(ops)
    states = _states(ops, states)
    parts = [symmetric_parts(ops, s) for s in states]
    gammas = [gram_robertson(ops, s).gamma for s in states]
    return minor_verdicts([p[0] for p in parts], [p[1] for p in parts], gammas, idx, tol)


def check_entangled_pair(x, y, psi1, psi2, tol: float = DEFAULT_TOL) -> URVerdict:
    ops = OperatorSet([x, y])
    _require_hermitian(ops)
    s1, s2 = _states(ops, [psi1, psi2])
    return sheur_verdict(*covariance_matrix(ops, s1), *covariance_matrix(ops, s2), tol)


# --- two-mode quadrature relation -------------------------------------------


class TwoModeResult(NamedTuple):
    new_ur: URVerdict
    dets_detk: URVerdict
    detk_residual: float
    dets_residual: float


def _two_mode_ladders(state: State, mode_dims) -> tuple[np.ndarray, np.ndarray]:
    mode_dims = [int(d) for d in mode_dims]
    if len(mode_dims) != 2 or min(mode_dims) < 2:
        raise InputError(f"expected two modes of dim >= 2, got {mode_dims}")
    if state.dim != mode_dims[0] * mode_dims[1]:
        raise DimensionMismatchError(f"state dim {state.dim} does not match modes {mode_dims}")
    return (
        embed(annihilation_op(mode_dims[0]), 0, mode_dims),
        embed(annihilation_op(mode_dims[1]), 1, mode_dims),
    )


def quadrature_moments(state, mode_dims) -> tuple[np.ndarray, np.ndarray]:
    """``(sigma, kappa)`` of ``(q_1, q_2, p_1, p_2)`` from explicit products."""
    state = as_state(state)
    a1, a2 = _two_mode_ladders(state, mode_dims)
    qs = [(a + a.conj().T) / np.sqrt(2) for a in (a1, a2)]
    ps = [(a - a.conj().T) / (1j * np.sqrt(2)) for a in (a1, a2)]
    return covariance_matrix(OperatorSet([*qs, *ps], names=["q1", "q2", "p1", "p2"]), state)


def check_two_mode_new_ur(state, mode_dims, tol: float = DEFAULT_TOL) -> TwoModeResult:
    """Quadrature relation for two modes plus the ``det S >= det K`` check for ``(a_1, a_2)``.

    ``det S`` and ``det K`` come from the Gram matrix of the non-Hermitian
    pair ``(a_1, a_2)``; the quadrature covariances come independently from
    :func:`quadrature_moments`. The residuals compare the Gram determinants
    with the closed forms

        det K = (cov(q1,p2) - cov(q2,p1))^2 / 4
        det S = [(var q1 + var p1)(var q2 + var p2) - (cov(q1,q2) + cov(p1,p2))^2] / 4
    """
    state = as_state(state)
    a1, a2 = _two_mode_ladders(state, mode_dims)
    data = gram_robertson(OperatorSet([a1, a2], names=["a1", "a2"]), state)
    det_s = _real_det(data.s_part)
    det_k = _real_det(data.k_part)

    sigma, _ = quadrature_moments(state, mode_dims)
    sum1 = sigma[0, 0] + sigma[2, 2]
    sum2 = sigma[1, 1] + sigma[3, 3]
    sym_cross = sigma[0, 1] + sigma[2, 3]
    anti_cross = sigma[0, 3] - sigma[1, 2]

    new_ur = URVerdict.evaluate(Relation.NEWUR, sum1 * sum2, sym_cross**2 + anti_cross**2, tol)
    dets_detk = URVerdict.evaluate(Relation.DETS_DETK, det_s, det_k, tol, order=2)
    detk_residual = abs(det_k - anti_cross**2 / 4)
    dets_residual = abs(det_s - (sum1 * sum2 - sym_cross**2) / 4)
    return TwoModeResult(new_ur, dets_detk, float(detk_residual), float(dets_residual))

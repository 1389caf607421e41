"""One-dimensional grid illustration of the operator-domain problem.

A wavefunction with a kink (the triangle ``1 - |x|``) lies in the domain of
``p = -i d/dx`` but not of ``p^2``. On a grid this shows up as follows: the
generalized covariance ``Re<X psi|Y psi> - <X><Y>``, which only needs
``X psi`` and ``Y psi``, converges under refinement, while the discrete norm
``||p^2 psi_h||^2`` grows like ``1/h``.

Stencils (these are part of the contract; the rates depend on them):

* FIRST_DERIV: ``(psi[i+1] - psi[i-1]) / (2h)`` inside, one-sided
  ``(psi[1] - psi[0]) / h`` and ``(psi[-1] - psi[-2]) / h`` at the edges.
* SECOND_DERIV: ``(psi[i+1] - 2 psi[i] + psi[i-1]) / h^2`` with zero ghost
  values beyond both edges.

The demonstration is stencil-relative. With the zero-padded second
difference, summation by parts turns ``<psi|p^2 psi>_h`` into a squared
first-difference norm, so the product-form ``<p^2>`` stays finite even for
the triangle; the divergence is visible in ``||p^2 psi_h||^2``.

Quadrature is the trapezoid rule. Wavefunctions must vanish (below 1e-8) at
the grid edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "OpKind",
    "GridOperator",
    "GridWavefunction",
    "Convergence",
    "StudyLevel",
    "DivergenceStudy",
    "position",
    "momentum",
    "momentum_squared",
    "apply",
    "compose",
    "inner",
    "expectation",
    "generalized_covariance",
    "product_form_covariance",
    "generalized_schrodinger",
    "triangle",
    "gaussian",
    "kink_divergence_study",
    "classify",
    "difference_ratios",
]

EDGE_TOL = 1e-8
DIVERGENCE_RATIO = 1.9
CAUCHY_RTOL = 0.01


class OpKind(str, Enum):
    MULTIPLY = "multiply"
    FIRST_DERIV = "first_deriv"
    SECOND_DERIV = "second_deriv"


@dataclass(frozen=True, eq=False)
class GridOperator:
    """``scale * D`` where ``D`` is a multiplication or difference stencil.

    ``samples`` holds the multiplier function on the grid for MULTIPLY, or a
    callable of ``x`` evaluated lazily on whatever grid the operator meets.
    ``chain`` lists operators applied before this one (right to left), which
    is how :func:`compose` represents products that are not a single stencil.
    """

    kind: OpKind
    scale: complex = 1.0
    samples: Callable[[np.ndarray], np.ndarray] | None = None
    chain: tuple["GridOperator", ...] = field(default=())


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    xs: np.ndarray
    values: np.ndarray

    @property
    def h(self) -> float:
        return float(self.xs[1] - self.xs[0])

    @property
    def n(self) -> int:
        return self.xs.size

    @classmethod
    def sample(cls, func: Callable[[np.ndarray], np.ndarray], x_min: float, x_max: float, n: int) -> "GridWavefunction":
        """Sample ``func`` on ``n`` uniform points and normalise with the trapezoid rule."""
        if n < 3:
            raise InputError(f"grid needs at least 3 points, got {n}")
        xs = np.linspace(x_min, x_max, n)
        values = np.asarray(func(xs), dtype=complex)
        edge = max(abs(values[0]), abs(values[-1]))
        if edge > EDGE_TOL * max(1.0, float(np.max(np.abs(values)))):
            raise InputError(f"wavefunction does not vanish at the grid edges (|psi| = {edge:.2e})")
        norm2 = _trapezoid(np.abs(values) ** 2, xs[1] - xs[0])
        if norm2 <= 0:
            raise InputError("wavefunction has zero norm")
        return cls(xs, values / np.sqrt(norm2))


def _trapezoid(f: np.ndarray, h: float):
    return h * (f.sum() - 0.5 * (f[0] + f[-1]))


def position() -> GridOperator:
    return GridOperator(OpKind.MULTIPLY, samples=lambda x: x)


def momentum() -> GridOperator:
    """``p = -i d/dx`` on the first-difference stencil."""
    return GridOperator(OpKind.FIRST_DERIV, scale=-1j)


def momentum_squared() -> GridOperator:
    """``p^2 = -d^2/dx^2`` on the 3-point stencil."""
    return GridOperator(OpKind.SECOND_DERIV, scale=-1.0)


def _stencil(kind: OpKind, values: np.ndarray, xs: np.ndarray, samples) -> np.ndarray:
    h = xs[1] - xs[0]
    if kind is OpKind.MULTIPLY:
        return np.asarray(samples(xs)) * values
    if kind is OpKind.FIRST_DERIV:
        out = np.empty_like(values)
        out[1:-1] = (values[2:] - values[:-2]) / (2 * h)
        out[0] = (values[1] - values[0]) / h
        out[-1] = (values[-1] - values[-2]) / h
        return out
    padded = np.concatenate([[0], values, [0]])
    return (padded[2:] - 2 * padded[1:-1] + padded[:-2]) / h**2


def apply(op: GridOperator, psi: GridWavefunction | np.ndarray, xs: np.ndarray | None = None) -> np.ndarray:
    """Samples of ``op psi``."""
    if isinstance(psi, GridWavefunction):
        values, xs = psi.values, psi.xs
    else:
        values = np.asarray(psi, dtype=complex)
    for inner_op in reversed(op.chain):
        values = apply(inner_op, values, xs)
    return op.scale * _stencil(op.kind, values, xs, op.samples)


def compose(outer: GridOperator, inner_op: GridOperator) -> GridOperator:
    """Operator product ``outer . inner_op`` as a grid stencil.

    Two first differences compose into the 3-point second difference (so
    ``compose(p, p)`` is :func:`momentum_squared`); two multiplications
    compose exactly; anything else is applied in sequence.
    """
    if not outer.chain and not inner_op.chain:
        if outer.kind is OpKind.FIRST_DERIV and inner_op.kind is OpKind.FIRST_DERIV:
            return GridOperator(OpKind.SECOND_DERIV, scale=outer.scale * inner_op.scale)
        if outer.kind is OpKind.MULTIPLY and inner_op.kind is OpKind.MULTIPLY:
            f, g = outer.samples, inner_op.samples
            return GridOperator(OpKind.MULTIPLY, outer.scale * inner_op.scale, samples=lambda x: f(x) * g(x))
    return GridOperator(outer.kind, outer.scale, outer.samples, (*outer.chain, inner_op))


def inner(f: np.ndarray, g: np.ndarray, h: float) -> complex:
    """Trapezoid ``<f|g>``."""
    return complex(_trapezoid(np.conj(f) * g, h))


def expectation(op: GridOperator, psi: GridWavefunction) -> complex:
    return inner(psi.values, apply(op, psi), psi.h)


def generalized_covariance(x_op: GridOperator, y_op: GridOperator, psi: GridWavefunction) -> float:
    """``Re<X psi|Y psi> - Re<X> Re<Y>``; never forms ``X Y``."""
    x_psi = apply(x_op, psi)
    y_psi = apply(y_op, psi)
    h = psi.h
    mx = inner(psi.values, x_psi, h).real
    my = inner(psi.values, y_psi, h).real
    return inner(x_psi, y_psi, h).real - mx * my


def product_form_covariance(x_op: GridOperator, y_op: GridOperator, psi: GridWavefunction) -> float:
    """``Re<psi|(XY + YX)|psi>/2 - <X><Y>`` with composed stencils.

    Only meaningful for smooth ``psi``; for kinked ``psi`` the composed
    stencil acts on a function outside the domain of the product.
    """
    xy = expectation(compose(x_op, y_op), psi)
    yx = expectation(compose(y_op, x_op), psi)
    mx = expectation(x_op, psi).real
    my = expectation(y_op, psi).real
    return 0.5 * (xy + yx).real - mx * my


def generalized_schrodinger(psi: GridWavefunction) -> tuple[float, float]:
    """``(lhs, rhs)`` of the Schrodinger relation for grid ``(x, p)`` in Gram form.

    ``lhs = var(x) var(p) - cov(x,p)^2`` from generalized covariances and
    ``rhs = (Im<dx psi|dp psi>)^2``, the squared antisymmetric Gram entry.
    """
    h = psi.h
    ops = (position(), momentum())
    vecs = []
    for op in ops:
        v = apply(op, psi)
        vecs.append(v - inner(psi.values, v, h) * psi.values)
    g = np.array([[inner(a, b, h) for b in vecs] for a in vecs])
    return float(g[0, 0].real * g[1, 1].real - g[0, 1].real ** 2), float(g[0, 1].imag ** 2)


# --- test functions --------------------------------------------------------


def triangle(center: float = 0.0, half_width: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    """``max(0, 1 - |x - center| / half_width)``: continuous, kinked at three points."""
    return lambda x: np.clip(1.0 - np.abs(x - center) / half_width, 0.0, None)


def gaussian(width: float = 1.0, center: float = 0.0) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.exp(-((x - center) ** 2) / (2 * width**2))


# --- refinement study ------------------------------------------------------


class Convergence(str, Enum):
    CONVERGENT = "CONVERGENT"
    DIVERGENT = "DIVERGENT"
    INCONCLUSIVE = "INCONCLUSIVE"


def classify(values: Sequence[float]) -> Convergence:
    """Classify a sequence of values on successively halved grids.

    DIVERGENT: every successive ratio is at least ``DIVERGENCE_RATIO``.
    CONVERGENT: successive differences do not grow and the last relative
    change is below ``CAUCHY_RTOL``.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        raise InputError("classification needs at least 3 levels")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = v[1:] / v[:-1]
    if np.all(ratios >= DIVERGENCE_RATIO):
        return Convergence.DIVERGENT
    diffs = np.abs(np.diff(v))
    last_rel = diffs[-1] / max(abs(v[-1]), np.finfo(float).tiny)
    if np.all(diffs[1:] <= diffs[:-1]) and last_rel < CAUCHY_RTOL:
        return Convergence.CONVERGENT
    return Convergence.INCONCLUSIVE


def difference_ratios(values: Sequence[float]) -> list[float]:
    """``|v[k] - v[k-1]| / |v[k+1] - v[k]|``; inf where the later difference is zero."""
    d = np.abs(np.diff(np.asarray(values, dtype=float)))
    with np.errstate(divide="ignore", invalid="ignore"):
        return [float(r) for r in np.where(d[1:] == 0, np.inf, d[:-1] / d[1:])]


@dataclass(frozen=True)
class StudyLevel:
    n: int
    h: float
    p2_norm_sq: float
    generalized_var_p: float
    product_form_var_p: float


@dataclass(frozen=True)
class DivergenceStudy:
    levels: tuple[StudyLevel, ...]
    generalized: Convergence
    product_form: Convergence

    @property
    def p2_norm_sq(self) -> list[float]:
        return [lv.p2_norm_sq for lv in self.levels]

    @property
    def generalized_var_p(self) -> list[float]:
        return [lv.generalized_var_p for lv in self.levels]

    def to_dict(self) -> dict:
        return {
            "levels": [lv.__dict__ for lv in self.levels],
            "generalized": self.generalized.value,
            "product_form": self.product_form.value,
        }


def kink_divergence_study(
    func: Callable[[np.ndarray], np.ndarray],
    levels: Sequence[int],
    x_min: float = -1.0,
    x_max: float = 1.0,
) -> DivergenceStudy:
    """Refine the grid for one function and classify both covariance forms.

    Per level the study records ``||p^2 psi_h||^2`` (composed second
    difference), the generalized variance of ``p`` and the product-form
    ``<p^2> - <p>^2``. The product form is classified by ``||p^2 psi_h||^2``:
    membership of ``psi`` in the domain of ``p^2`` is what that form needs.
    """
    levels = [int(n) for n in levels]
    if len(levels) < 3:
        raise InputError("a refinement study needs at least 3 levels")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise InputError(f"levels must be strictly increasing, got {levels}")
    rows = []
    p, p2 = momentum(), momentum_squared()
    for n in levels:
        psi = GridWavefunction.sample(func, x_min, x_max, n)
        p2psi = apply(p2, psi)
        rows.append(
            StudyLevel(
                n=n,
                h=psi.h,
                p2_norm_sq=inner(p2psi, p2psi, psi.h).real,
                generalized_var_p=generalized_covariance(p, p, psi),
                product_form_var_p=product_form_covariance(p, p, psi),
            )
        )
    return DivergenceStudy(
        levels=tuple(rows),
        generalized=classify([r.generalized_var_p for r in rows]),
        product_form=classify([r.p2_norm_sq for r in rows]),
    )

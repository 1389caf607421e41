"""Dense complex linear algebra used by the uncertainty-relation checkers.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` (or real arrays,
which are promoted). Index sets for principal minors are 0-based tuples of
strictly increasing integers.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import DimensionMismatchError, HermiticityError, InputError, NotPSDError

__all__ = [
    "CLAMP_RTOL",
    "as_matrix",
    "is_hermitian",
    "is_psd",
    "determinant",
    "batched_determinant",
    "principal_minor",
    "principal_minors",
    "index_sets",
    "char_coeffs",
    "elementary_symmetric",
    "hermitian_sqrt",
    "matrix_scale",
]

#: Relative threshold (times the trace) below which negative eigenvalues of a
#: density matrix are treated as round-off and clamped to zero.
CLAMP_RTOL = 1e-10


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a square complex 2-D array, raising on bad shape."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    return arr


def matrix_scale(*mats) -> float:
    """``max(1, ||M||_2 ...)`` over the given matrices; used to scale tolerances."""
    norms = [np.linalg.norm(np.asarray(m), 2) if np.ndim(m) == 2 else abs(m) for m in mats]
    return float(max([1.0, *norms]))


def is_hermitian(m, tol: float = 1e-12) -> bool:
    """True when ``max|M - M^H| <= tol * max(1, max|M|)``."""
    m = as_matrix(m)
    ref = max(1.0, float(np.max(np.abs(m))))
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * ref)


def is_psd(m, tol: float = 1e-10) -> bool:
    """Hermitian and smallest eigenvalue ``>= -tol * max(1, ||M||)``."""
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        return False
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return bool(evals[0] >= -tol * max(1.0, float(np.max(np.abs(evals)))))


def batched_determinant(stack: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square matrices, shape ``(..., k, k)``.

    Gaussian elimination with partial pivoting, vectorised over the leading
    axes. A zero pivot column yields a zero determinant.
    """
    a = np.array(stack, dtype=complex, copy=True)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatchError(f"expected a stack of square matrices, got shape {a.shape}")
    batch_shape = a.shape[:-2]
    k = a.shape[-1]
    a = a.reshape(-1, k, k)
    rows = np.arange(a.shape[0])
    det = np.ones(a.shape[0], dtype=complex)
    for col in range(k):
        piv = col + np.argmax(np.abs(a[:, col:, col]), axis=1)
        swap = piv != col
        if np.any(swap):
            r = rows[swap]
            top = a[r, col, :].copy()
            a[r, col, :] = a[r, piv[swap], :]
            a[r, piv[swap], :] = top
            det[swap] = -det[swap]
        pivot = a[:, col, col]
        det *= pivot
        live = pivot != 0
        if col + 1 < k and np.any(live):
            factors = np.zeros((a.shape[0], k - col - 1), dtype=complex)
            factors[live] = a[live, col + 1:, col] / pivot[live, None]
            a[:, col + 1:, col:] -= factors[:, :, None] * a[:, None, col, col:]
    return det.reshape(batch_shape)


def determinant(m) -> complex:
    """Determinant by pivoted elimination; exact for 1x1 input."""
    m = as_matrix(m)
    if m.shape[0] == 1:
        return complex(m[0, 0])
    return complex(batched_determinant(m))


def _check_indices(idx, dim: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in idx)
    if not idx:
        raise InputError("index set must be non-empty")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise InputError(f"index set {idx} must be strictly increasing")
    if idx[0] < 0 or idx[-1] >= dim:
        raise InputError(f"index set {idx} out of range for dimension {dim}")
    return idx


def principal_minor(m, idx) -> complex:
    """Determinant of the submatrix on rows and columns ``idx`` (0-based)."""
    m = as_matrix(m)
    idx = _check_indices(idx, m.shape[0])
    return determinant(m[np.ix_(idx, idx)])


def index_sets(n: int, r: int) -> list[tuple[int, ...]]:
    """All ``C(n, r)`` increasing index tuples of length ``r``."""
    return list(combinations(range(n), r))


def principal_minors(m, r: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """All order-``r`` principal minors, returned with their index sets."""
    m = as_matrix(m)
    n = m.shape[0]
    if not 1 <= r <= n:
        raise InputError(f"minor order r={r} out of range 1..{n}")
    sets = index_sets(n, r)
    sel = np.array(sets)
    subs = m[sel[:, :, None], sel[:, None, :]]
    return sets, batched_determinant(subs)


def elementary_symmetric(values) -> np.ndarray:
    """``[e_1, ..., e_n]`` of the given values."""
    values = np.asarray(values)
    e = np.zeros(values.size + 1, dtype=np.result_type(values, float))
    e[0] = 1
    for v in values:
        e[1:] = e[1:] + v * e[:-1]
    return e[1:]


def char_coeffs(m, method: str = "minors") -> np.ndarray:
    """Characteristic coefficients ``[C_1, ..., C_n]`` of ``m``.

    ``C_r`` is the sum of all order-``r`` principal minors, so ``C_1`` is the
    trace and ``C_n`` the determinant.

    Parameters
    ----------
    m : array_like
        Square matrix.
    method : {"minors", "eigen"}
        ``"minors"`` sums the minors directly and works for any matrix.
        ``"eigen"`` takes elementary symmetric polynomials of the eigenvalues
        and requires a Hermitian input; it exists as an independent route
        for cross-checking.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if method == "minors":
        return np.array([principal_minors(m, r)[1].sum() for r in range(1, n + 1)])
    if method == "eigen":
        if not is_hermitian(m, 1e-10):
            raise HermiticityError("eigenvalue route requires a Hermitian matrix")
        return elementary_symmetric(np.linalg.eigvalsh((m + m.conj().T) / 2)).astype(complex)
    raise InputError(f"unknown method {method!r}")


def hermitian_sqrt(rho, tol: float = 1e-10) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-CLAMP_RTOL * tr(rho), 0)`` are clamped to zero;
    anything more negative raises :class:`NotPSDError`.
    """
    rho = as_matrix(rho, "rho")
    if not is_hermitian(rho, tol):
        raise HermiticityError("matrix square root requires a Hermitian input")
    evals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    eps = CLAMP_RTOL * max(float(np.trace(rho).real), 0.0)
    if evals[0] < -eps:
        raise NotPSDError(f"matrix is not positive semidefinite (eigenvalue {evals[0]:.3e})")
    root = (vecs * np.sqrt(np.clip(evals, 0.0, None))) @ vecs.conj().T
    return (root + root.conj().T) / 2


"""Problem files for ``ur-lab check``.

A problem file is one JSON document::

    {
      "dim": 20,                       # or "mode_dims": [4, 4]
      "operators": {
        "q": {"builtin": "q"},
        "X": {"matrix": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], "hermitian": true}
      },
      "states": {
        "vac": {"builtin": "fock", "n": 0},
        "psi": {"pure": [[0.6, 0], [0, 0.8]]},
        "rho": {"density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
      },
      "checks": [
        {"relation": "SUR", "operators": ["q", "p"], "states": ["vac"]},
        {"relation": "EUR1", "operators": ["q", "p"], "states": ["vac", "f1"], "order": 2},
        {"relation": "MINOR_SIGMA_KAPPA", "operators": ["q", "p"], "states": ["vac"], "indices": [1, 2]}
      ]
    }

Complex numbers are ``[re, im]`` pairs; matrices are row-major lists of rows.
Minor index sets in ``indices`` are 1-based, as in the usual minor notation.

Builtin operators: ``a``, ``adag``, ``n``, ``q``, ``p`` (Fock space, optional
``"mode"`` 0-based for ``mode_dims`` files), ``jx``, ``jy``, ``jz`` (spin
``(dim - 1) / 2``), ``identity``. Builtin states: ``fock`` (``"n"``, a list
of levels for ``mode_dims`` files), ``coherent`` (``"alpha"``),
``maximally_mixed``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .relations import (
    DEFAULT_TOL,
    Relation,
    URVerdict,
    check_char_ur_multistate,
    check_entangled_pair,
    check_gram_superadditivity,
    check_minor_urs,
    check_robertson,
    check_schrodinger,
    check_two_mode_new_ur,
)
from .states import (
    DensityMatrix,
    OperatorSet,
    PureState,
    annihilation_op,
    coherent_state,
    embed,
    fock_state,
    number_op,
    quadratures,
    spin_ops,
    tensor,
)
from .uncertainty import gram_robertson

__all__ = ["ProblemError", "Problem", "Check", "load_problem", "parse_problem", "run_checks"]


class ProblemError(InputError):
    """Malformed or inconsistent problem file; the message starts with a location."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True)
class Check:
    relation: Relation
    operators: tuple[str, ...]
    states: tuple[str, ...]
    order: int | None = None
    indices: tuple[int, ...] | None = None  # 1-based, as written in the file

    def inputs(self) -> dict:
        d = {"operators": list(self.operators), "states": list(self.states)}
        if self.order is not None:
            d["order"] = self.order
        if self.indices is not None:
            d["indices"] = list(self.indices)
        return d


@dataclass
class Problem:
    dim: int
    mode_dims: tuple[int, ...] | None
    operators: dict[str, np.ndarray]
    hermitian: dict[str, bool]
    states: dict[str, PureState | DensityMatrix]
    checks: list[Check]


def _complex(value, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise ProblemError(where, f"expected a complex number [re, im], got {value!r}")


def _vector(value, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != dim:
        raise ProblemError(where, f"expected a vector of {dim} complex entries")
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(value)])


def _matrix(value, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != dim:
        raise ProblemError(where, f"expected {dim} rows")
    return np.array([_vector(row, dim, f"{where}[{i}]") for i, row in enumerate(value)])


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ProblemError(where, f"missing required field {key!r}")
    return obj[key]


def _builtin_operator(spec: dict, prob_dim: int, mode_dims, where: str) -> np.ndarray:
    name = spec["builtin"]
    if mode_dims is not None and name in {"a", "adag", "n", "q", "p"}:
        mode = spec.get("mode")
        if not isinstance(mode, int) or not 0 <= mode < len(mode_dims):
            raise ProblemError(where, f"'mode' must be an integer in 0..{len(mode_dims) - 1}")
        d = mode_dims[mode]
    else:
        d = prob_dim
    try:
        if name == "a":
            op = annihilation_op(d)
        elif name == "adag":
            op = annihilation_op(d).conj().T
        elif name == "n":
            op = number_op(d)
        elif name in ("q", "p"):
            op = quadratures(d)["qp".index(name)]
        elif name in ("jx", "jy", "jz"):
            op = spin_ops(d - 1)["xyz".index(name[1])]
        elif name == "identity":
            op = np.eye(d, dtype=complex)
        else:
            raise ProblemError(where, f"unknown builtin operator {name!r}")
    except InputError as exc:
        if isinstance(exc, ProblemError):
            raise
        raise ProblemError(where, str(exc)) from None
    if mode_dims is not None and name in {"a", "adag", "n", "q", "p"}:
        op = embed(op, spec["mode"], mode_dims)
    return op


def _builtin_state(spec: dict, dim: int, mode_dims, where: str):
    name = spec["builtin"]
    try:
        if name == "fock":
            n = _require(spec, "n", where)
            if mode_dims is not None:
                if not isinstance(n, list) or len(n) != len(mode_dims):
                    raise ProblemError(where, "'n' must list one Fock level per mode")
                return PureState(tensor(*(fock_state(k, d).amplitudes for k, d in zip(n, mode_dims))))
            return fock_state(int(n), dim)
        if name == "coherent":
            if mode_dims is not None:
                raise ProblemError(where, "coherent builtin is single-mode only")
            return coherent_state(_complex(_require(spec, "alpha", where), f"{where}.alpha"), dim)
        if name == "maximally_mixed":
            return DensityMatrix.maximally_mixed(dim)
    except InputError as exc:
        if isinstance(exc, ProblemError):
            raise
        raise ProblemError(where, str(exc)) from None
    raise ProblemError(where, f"unknown builtin state {name!r}")


_NEEDS_ORDER = {Relation.EUR1, Relation.EUR2}
_NEEDS_INDICES = {Relation.MINOR_SIGMA_KAPPA, Relation.MINOR_GRAM_SUPERADD}
_TWO_MODE = {Relation.NEWUR, Relation.DETS_DETK}


def parse_problem(doc) -> Problem:
    """Validate a decoded JSON document and build a :class:`Problem`."""
    if not isinstance(doc, dict):
        raise ProblemError("<root>", "expected a JSON object")
    mode_dims = doc.get("mode_dims")
    if mode_dims is not None:
        if not isinstance(mode_dims, list) or not all(isinstance(d, int) and d >= 1 for d in mode_dims):
            raise ProblemError("mode_dims", "expected a list of positive integers")
        mode_dims = tuple(mode_dims)
        dim = int(np.prod(mode_dims))
        if "dim" in doc and doc["dim"] != dim:
            raise ProblemError("dim", f"dim {doc['dim']} disagrees with mode_dims product {dim}")
    else:
        dim = _require(doc, "dim", "<root>")
        if not isinstance(dim, int) or dim < 1:
            raise ProblemError("dim", "expected a positive integer")

    operators, hermitian = {}, {}
    for name, spec in (doc.get("operators") or {}).items():
        where = f"operators.{name}"
        if not isinstance(spec, dict):
            raise ProblemError(where, "expected an object")
        if "builtin" in spec:
            op = _builtin_operator(spec, dim, mode_dims, where)
        else:
            op = _matrix(_require(spec, "matrix", where), dim, f"{where}.matrix")
        try:
            flags = None if "hermitian" not in spec else [bool(spec["hermitian"])]
            checked = OperatorSet([op], hermitian=flags, names=[name])
        except InputError as exc:
            raise ProblemError(where, str(exc)) from None
        operators[name] = op
        hermitian[name] = checked.hermitian_flags[0]

    states = {}
    for name, spec in (doc.get("states") or {}).items():
        where = f"states.{name}"
        if not isinstance(spec, dict):
            raise ProblemError(where, "expected an object")
        try:
            if "builtin" in spec:
                states[name] = _builtin_state(spec, dim, mode_dims, where)
            elif "pure" in spec:
                states[name] = PureState(_vector(spec["pure"], dim, f"{where}.pure"))
            elif "density" in spec:
                states[name] = DensityMatrix(_matrix(spec["density"], dim, f"{where}.density"))
            else:
                raise ProblemError(where, "expected one of 'pure', 'density' or 'builtin'")
        except ProblemError:
            raise
        except InputError as exc:
            raise ProblemError(where, str(exc)) from None

    checks = []
    for i, spec in enumerate(_require(doc, "checks", "<root>")):
        where = f"checks[{i}]"
        if not isinstance(spec, dict):
            raise ProblemError(where, "expected an object")
        try:
            relation = Relation(_require(spec, "relation", where))
        except ValueError:
            raise ProblemError(f"{where}.relation", f"unknown relation {spec['relation']!r}") from None
        op_names = tuple(spec.get("operators", []))
        state_names = tuple(_require(spec, "states", where))
        for j, nm in enumerate(op_names):
            if nm not in operators:
                raise ProblemError(f"{where}.operators[{j}]", f"undefined operator {nm!r}")
        for j, nm in enumerate(state_names):
            if nm not in states:
                raise ProblemError(f"{where}.states[{j}]", f"undefined state {nm!r}")
        order = spec.get("order")
        indices = spec.get("indices")
        if relation in _NEEDS_ORDER and not isinstance(order, int):
            raise ProblemError(f"{where}.order", "an integer order is required")
        if relation in _NEEDS_INDICES:
            if not isinstance(indices, list) or not all(isinstance(k, int) for k in indices):
                raise ProblemError(f"{where}.indices", "a list of 1-based indices is required")
            indices = tuple(indices)
        if relation in _TWO_MODE and (mode_dims is None or len(mode_dims) != 2):
            raise ProblemError(where, f"{relation.value} needs a file with two mode_dims")
        checks.append(Check(relation, op_names, state_names, order, indices))
    return Problem(dim, mode_dims, operators, hermitian, states, checks)


def load_problem(path) -> Problem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    except OSError as exc:
        raise ProblemError(str(path), exc.strerror or str(exc)) from None
    return parse_problem(doc)


def _run_one(problem: Problem, check: Check, tol: float) -> list[URVerdict]:
    ops = OperatorSet(
        [problem.operators[n] for n in check.operators],
        hermitian=[problem.hermitian[n] for n in check.operators],
        names=list(check.operators),
    ) if check.operators else None
    states = [problem.states[n] for n in check.states]
    rel = check.relation

    def need_ops(count=None):
        if ops is None or (count is not None and len(ops) != count):
            raise InputError(f"{rel.value} needs {count or 'at least one'} operator(s)")
        return ops

    def need_states(count):
        if len(states) != count:
            raise InputError(f"{rel.value} needs exactly {count} state(s)")
        return states

    if rel is Relation.RUR:
        return [check_robertson(need_ops(), need_states(1)[0], tol)]
    if rel is Relation.SUR:
        x, y = need_ops(2)
        return [check_schrodinger(x, y, need_states(1)[0], tol)]
    if rel is Relation.EUR1:
        return [check_char_ur_multistate(need_ops(), states, check.order, tol)]
    if rel is Relation.EUR2:
        gammas = [gram_robertson(need_ops(), s).gamma for s in states]
        return [check_gram_superadditivity(gammas, check.order, tol)]
    if rel in _NEEDS_INDICES:
        idx = tuple(k - 1 for k in check.indices)
        sk, gram = check_minor_urs(need_ops(), states, idx, tol)
        return [sk if rel is Relation.MINOR_SIGMA_KAPPA else gram]
    if rel is Relation.SHEUR:
        x, y = need_ops(2)
        s1, s2 = need_states(2)
        return [check_entangled_pair(x, y, s1, s2, tol)]
    res = check_two_mode_new_ur(need_states(1)[0], problem.mode_dims, tol)
    return [res.new_ur if rel is Relation.NEWUR else res.dets_detk]


def run_checks(problem: Problem, tol: float = DEFAULT_TOL) -> list[dict]:
    """Evaluate every check; each entry is ``{"check": i, "inputs": ..., **verdict}``.

    Precondition failures raise :class:`ProblemError` naming the check.
    """
    out = []
    for i, check in enumerate(problem.checks):
        try:
            verdicts = _run_one(problem, check, tol)
        except ProblemError:
            raise
        except InputError as exc:
            raise ProblemError(f"checks[{i}]", str(exc)) from None
        for v in verdicts:
            out.append({"check": i, "inputs": check.inputs(), **v.to_dict()})
    return out

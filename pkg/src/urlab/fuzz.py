"""Seeded random campaigns over every relation checker.

Trial ``t`` draws its inputs from ``derive_seed(seed, t)`` only, so results do
not depend on how trials are scheduled across threads. Aggregation happens
in trial order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .linalg import char_coeffs
from .relations import (
    DEFAULT_TOL,
    Relation,
    URVerdict,
    check_two_mode_new_ur,
    minor_verdicts,
    robertson_verdict,
    schrodinger_verdict,
    sheur_verdict,
)
from .states import (
    OperatorSet,
    derive_seed,
    make_rng,
    random_density,
    random_hermitian,
    random_operator,
    random_pure,
)
from .uncertainty import covariance_matrix, gram_robertson

__all__ = ["FuzzConfig", "RelationStats", "FuzzResult", "run_trial", "run_campaign"]


@dataclass(frozen=True)
class FuzzConfig:
    trials: int
    max_dim: int = 8
    max_ops: int = 4
    max_states: int = 3
    seed: int = 0
    mixed: bool = False
    nonhermitian: bool = False
    tol: float = DEFAULT_TOL
    max_minor_sets: int = 20
    two_mode: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_dim < 2 or self.max_ops < 1 or self.max_states < 1:
            raise ValueError("max_dim >= 2, max_ops >= 1 and max_states >= 1 are required")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _draw_state(rng, dim: int, mixed: bool):
    if mixed:
        return random_density(dim, int(rng.integers(1, dim + 1)), rng)
    return random_pure(dim, rng)


def _minor_sample(rng, n: int, limit: int) -> list[tuple[int, ...]]:
    sets = [c for r in range(1, n + 1) for c in combinations(range(n), r)]
    if len(sets) <= limit:
        return sets
    pick = np.sort(rng.choice(len(sets), size=limit, replace=False))
    return [sets[i] for i in pick]


def _coefficient_verdicts(relation, lhs_coeffs, rhs_coeffs, tol) -> list[URVerdict]:
    return [
        URVerdict.evaluate(relation, lhs_coeffs[r].real, rhs_coeffs[r].real, tol, order=r + 1)
        for r in range(len(lhs_coeffs))
    ]


def run_trial(config: FuzzConfig, trial: int) -> list[URVerdict]:
    """All verdicts for one trial."""
    rng = make_rng(derive_seed(config.seed, trial))
    tol = config.tol
    dim = int(rng.integers(2, config.max_dim + 1))
    n = int(rng.integers(1, config.max_ops + 1))
    m = int(rng.integers(1, config.max_states + 1))
    draw_op = random_operator if config.nonhermitian else random_hermitian
    ops = OperatorSet([draw_op(dim, rng) for _ in range(n)])
    states = [_draw_state(rng, dim, config.mixed) for _ in range(m)]

    gammas = [gram_robertson(ops, s).gamma for s in states]
    if ops.all_hermitian:
        parts = [covariance_matrix(ops, s) for s in states]
    else:
        parts = [(g.real, g.imag) for g in gammas]
    s_list = [p[0] for p in parts]
    k_list = [p[1] for p in parts]

    out: list[URVerdict] = []
    if ops.all_hermitian:
        pairs = list(combinations(range(n), 2))
        for sigma, kappa in parts:
            out.append(robertson_verdict(sigma, kappa, tol))
            for j, k in pairs:
                blk = np.ix_((j, k), (j, k))
                out.append(schrodinger_verdict(sigma[blk], kappa[blk], tol))
        for (s1, k1), (s2, k2) in combinations(parts, 2):
            for j, k in pairs:
                blk = np.ix_((j, k), (j, k))
                out.append(sheur_verdict(s1[blk], k1[blk], s2[blk], k2[blk], tol))

    out += _coefficient_verdicts(Relation.EUR1, char_coeffs(sum(s_list)), char_coeffs(sum(k_list)), tol)
    total = char_coeffs(sum(gammas))
    separate = sum(char_coeffs(g) for g in gammas)
    out += _coefficient_verdicts(Relation.EUR2, total, separate, tol)
    for idx in _minor_sample(rng, n, config.max_minor_sets):
        out += minor_verdicts(s_list, k_list, gammas, idx, tol)

    if config.two_mode:
        top = max(2, config.max_dim // 2)
        mode_dims = [int(rng.integers(2, top + 1)) for _ in range(2)]
        state = _draw_state(rng, mode_dims[0] * mode_dims[1], config.mixed)
        res = check_two_mode_new_ur(state, mode_dims, tol)
        out += [res.new_ur, res.dets_detk]
    return out


@dataclass
class RelationStats:
    checks: int = 0
    failures: int = 0
    worst_margin: float = float("inf")
    worst_scaled_margin: float = float("inf")

    def add(self, v: URVerdict) -> None:
        self.checks += 1
        self.failures += not v.passed
        self.worst_margin = min(self.worst_margin, v.margin)
        self.worst_scaled_margin = min(self.worst_scaled_margin, v.scaled_margin)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class FuzzResult:
    config: FuzzConfig
    stats: dict[str, RelationStats] = field(default_factory=dict)
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def total_checks(self) -> int:
        return sum(s.checks for s in self.stats.values())


def run_campaign(config: FuzzConfig, jobs: int = 1) -> FuzzResult:
    """Run ``config.trials`` trials on ``jobs`` threads and aggregate in trial order."""
    result = FuzzResult(config)

    def work(t):
        return run_trial(config, t)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            batches = pool.map(work, range(config.trials))
            _aggregate(result, batches)
    else:
        _aggregate(result, map(work, range(config.trials)))
    return result


def _aggregate(result: FuzzResult, batches) -> None:
    for trial, verdicts in enumerate(batches):
        for v in verdicts:
            stats = result.stats.setdefault(v.relation.value, RelationStats())
            stats.add(v)
            if not v.passed:
                result.violations.append({"trial": trial, **v.to_dict()})
    result.stats = dict(sorted(result.stats.items()))

"""``ur-lab`` command line.

Exit status: 0 when every check passes, 1 when an inequality is violated (or
the domain demo misclassifies), 2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .errors import InputError
from .fuzz import FuzzConfig, run_campaign
from .grid import Convergence, difference_ratios, gaussian, kink_divergence_study, triangle
from .problem import load_problem, run_checks
from .relations import DEFAULT_TOL
from .report import VerdictReport

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

TOL_ENV = "UR_LAB_TOL"

# function -> (callable, x_min, x_max, expected generalized, expected product form)
DEMO_FUNCTIONS = {
    "triangle": (triangle(), -1.0, 1.0, Convergence.CONVERGENT, Convergence.DIVERGENT),
    "gaussian": (gaussian(), -8.0, 8.0, Convergence.CONVERGENT, Convergence.CONVERGENT),
}


class UsageError(Exception):
    pass


def _tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a decimal number") from None
    if not tol >= 0:
        raise UsageError(f"{TOL_ENV} must be non-negative")
    return tol


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    tol = _tolerance()
    problem = load_problem(args.file)
    entries = run_checks(problem, tol)
    report = VerdictReport.from_verdicts("check", entries, {"file": os.path.basename(args.file), "tol": tol})
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def fuzz_report(config: FuzzConfig, jobs: int = 1) -> VerdictReport:
    result = run_campaign(config, jobs=jobs)
    worst = min(result.stats.items(), key=lambda kv: kv[1].worst_scaled_margin)
    summary = {
        "trials": config.trials,
        "checks": result.total_checks,
        "failed": len(result.violations),
        "passed": result.total_checks - len(result.violations),
        "seed": config.seed,
        "worst_relation": worst[0],
        "worst_scaled_margin": worst[1].worst_scaled_margin,
    }
    return VerdictReport(
        command="fuzz",
        parameters=config.to_dict(),
        verdicts=result.violations,
        relations={k: s.to_dict() for k, s in result.stats.items()},
        summary=summary,
    )


def cmd_fuzz(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    try:
        config = FuzzConfig(
            trials=args.trials,
            max_dim=args.max_dim,
            max_ops=args.max_ops,
            max_states=args.max_states,
            seed=args.seed,
            mixed=args.mixed,
            nonhermitian=args.nonhermitian,
            tol=_tolerance(),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = fuzz_report(config, jobs=args.jobs)
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _levels(text: str) -> list[int]:
    try:
        levels = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--levels must be comma-separated integers, got {text!r}") from None
    if len(levels) < 3:
        raise UsageError("--levels needs at least 3 refinement levels")
    return levels


def format_study(name: str, study) -> str:
    lines = [
        f"function: {name}",
        f"{'N':>6} {'h':>12} {'||p^2 psi||^2':>16} {'gen. (dp)^2':>14} {'<p^2>-<p>^2':>14}",
    ]
    for lv in study.levels:
        lines.append(
            f"{lv.n:>6} {lv.h:>12.6g} {lv.p2_norm_sq:>16.8g} {lv.generalized_var_p:>14.10f} {lv.product_form_var_p:>14.10f}"
        )
    gen_ratios = ", ".join(f"{r:.3g}" for r in difference_ratios(study.generalized_var_p))
    lines.append(f"generalized difference ratios: {gen_ratios}")
    lines.append(f"generalized: {study.generalized.value}, product-form: {study.product_form.value}")
    return "\n".join(lines) + "\n"


def cmd_demo_domain(args) -> int:
    levels = _levels(args.levels)
    func, x_min, x_max, want_gen, want_prod = DEMO_FUNCTIONS[args.function]
    try:
        study = kink_divergence_study(func, levels, x_min, x_max)
    except InputError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _emit(json.dumps({"function": args.function, **study.to_dict()}, indent=2, sort_keys=True) + "\n", args.output)
    else:
        _emit(format_study(args.function, study), args.output)
    ok = study.generalized is want_gen and study.product_form is want_prod
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ur-lab", description="Verify characteristic uncertainty relations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run the checks listed in a problem file")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fuzz", help="seeded random campaign over all relations")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-dim", type=int, default=8)
    p.add_argument("--max-ops", type=int, default=4)
    p.add_argument("--max-states", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mixed", action="store_true", help="draw density matrices instead of pure states")
    p.add_argument("--nonhermitian", action="store_true", help="draw non-Hermitian operators (S/K checks)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads; does not change the report")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("demo-domain", help="grid refinement study of the operator-domain problem")
    p.add_argument("--levels", default="129,257,513,1025")
    p.add_argument("--function", choices=sorted(DEMO_FUNCTIONS), default="triangle")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_demo_domain)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InputError) as exc:
        print(f"ur-lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

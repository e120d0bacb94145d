"""Command-line interface.

Subcommands: shell (enumerate), spectrum (autocorrelation + bound check),
lemma (translate-budget sweeps), extremize (sphere-constrained ascent),
sweep (multi-lambda CSV). Exit codes: 0 = all checks passed, 1 = a
mathematical bound or budget violation was detected, 2 = usage or
resource error. All output is deterministic for fixed seeds, including
across --threads settings; floats carry 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import jsonfmt
from .errors import ResourceLimitError, TorusSpectraError
from .extremizer import ExtremizerConfig, maximize, report_passes_bound
from .lattice import enumerate_shell, shell_to_json
from .lemma import sweep_to_json, verify_lemma
from .spectra import (
    BOUND_SLACK,
    applicable_bound,
    autocorrelation,
    coeffs_from_json,
    coeffs_to_json,
    lp_norm,
    random_coeffs,
    spectrum_entries_json,
)

THREADS_ENV = "TORUS_SPECTRA_THREADS"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _resolve_threads(value: int | None) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        if env is not None:
            try:
                value = int(env)
            except ValueError:
                raise TorusSpectraError(f"{THREADS_ENV}={env!r} is not an integer") from None
        else:
            value = os.cpu_count() or 1
    if value < 1:
        raise TorusSpectraError(f"thread count must be >= 1, got {value}")
    return value


def _emit(obj, args) -> None:
    print(jsonfmt.dumps(obj, pretty=not args.json))


def _parse_random_mode(text: str) -> tuple[str, int | None]:
    mode, _, suffix = text.partition(":")
    if mode not in ("uniform", "gaussian", "sparse"):
        raise TorusSpectraError(f"unknown random mode {text!r}")
    if suffix:
        if mode != "sparse":
            raise TorusSpectraError(f"only sparse takes a size suffix, got {text!r}")
        try:
            return mode, int(suffix)
        except ValueError:
            raise TorusSpectraError(f"bad sparse size in {text!r}") from None
    return mode, None


def _trial_seed(seed: int, lam: int, trial: int) -> int:
    # Collision-free derivation of per-(lambda, trial) streams.
    return int(np.random.SeedSequence([seed, lam, trial]).generate_state(1, np.uint64)[0])


def cmd_shell(args) -> int:
    shell = enumerate_shell(args.dim, args.lam)
    if args.count_only:
        print(len(shell))
    else:
        _emit(shell_to_json(shell), args)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    shell = enumerate_shell(args.dim, args.lam)
    if args.coeffs is not None:
        try:
            with open(args.coeffs, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise TorusSpectraError(f"cannot read coefficient file: {exc}") from exc
        coeffs = coeffs_from_json(obj, force_normalize=args.force_normalize)
        if (coeffs.shell.dim, coeffs.shell.lam) != (shell.dim, shell.lam):
            raise TorusSpectraError(
                f"coefficient file is for shell({coeffs.shell.dim}, {coeffs.shell.lam}), "
                f"not shell({shell.dim}, {shell.lam})"
            )
    else:
        mode, k = _parse_random_mode(args.random)
        coeffs = random_coeffs(shell, seed=args.seed, mode=mode, k=k)
    p = float(args.p) if args.p is not None else float(shell.dim)
    spectrum = autocorrelation(coeffs)
    value = lp_norm(spectrum, p)
    bound = applicable_bound(shell.dim, p)
    passed = bound is None or value <= bound + BOUND_SLACK
    _emit(
        {
            "dim": shell.dim,
            "lambda": shell.lam,
            "entries": spectrum_entries_json(spectrum),
            "lp": {"p": p, "value": value},
            "bound": bound,
            "passed": passed,
        },
        args,
    )
    return EXIT_OK if passed else EXIT_VIOLATION


def cmd_lemma(args) -> int:
    shell = enumerate_shell(args.dim, args.lam)
    report = verify_lemma(
        shell,
        mode=args.mode,
        count=args.count if args.mode == "sampled" else None,
        seed=args.seed,
        extra_points=args.extra_points,
        threads=args.threads,
    )
    _emit(sweep_to_json(report), args)
    return EXIT_OK if not report.violations else EXIT_VIOLATION


def cmd_extremize(args) -> int:
    shell = enumerate_shell(args.dim, args.lam)
    p = float(args.p) if args.p is not None else float(shell.dim)
    cfg = ExtremizerConfig(
        restarts=args.restarts, max_iters=args.iters, seed=args.seed
    )
    report = maximize(shell, p, cfg, threads=args.threads)
    passed = report_passes_bound(report)
    coeffs_obj = coeffs_to_json(report.best_coeffs)
    _emit(
        {
            "dim": shell.dim,
            "lambda": shell.lam,
            "p": p,
            "best_value": report.best_value,
            "bound": report.bound_value,
            "gap": None if report.bound_value is None else report.bound_value - report.best_value,
            "converged": report.converged,
            "restarts": report.restarts,
            "coeffs": coeffs_obj["coeffs"],
        },
        args,
    )
    return EXIT_OK if passed else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    if args.lambda_min > args.lambda_max:
        raise TorusSpectraError(
            f"lambda-min {args.lambda_min} exceeds lambda-max {args.lambda_max}"
        )
    header = "dim,lambda,shell_count,lp_value,bound,passed,max_nonedge_translates,budget"
    lines = [header]
    all_passed = True
    any_violation = False
    for lam in range(args.lambda_min, args.lambda_max + 1):
        shell = enumerate_shell(args.dim, lam)
        if len(shell) == 0:
            continue
        p = float(shell.dim)
        lp_value = 0.0
        for trial in range(args.random_trials):
            coeffs = random_coeffs(shell, seed=_trial_seed(args.seed, lam, trial), mode="gaussian")
            lp_value = max(lp_value, lp_norm(autocorrelation(coeffs), p))
        bound = applicable_bound(shell.dim, p)
        passed = bound is None or lp_value <= bound + BOUND_SLACK
        all_passed &= passed
        if args.lemma_sample is not None:
            lemma_report = verify_lemma(
                shell, mode="sampled", count=args.lemma_sample, seed=args.seed,
                threads=args.threads,
            )
        else:
            try:
                lemma_report = verify_lemma(shell, mode="exhaustive", threads=args.threads)
            except ResourceLimitError:
                lemma_report = None  # too many subsets; lemma column left blank
        if lemma_report is not None and lemma_report.violations:
            any_violation = True
        lines.append(
            ",".join(
                [
                    str(shell.dim),
                    str(lam),
                    str(len(shell)),
                    jsonfmt.format_float(lp_value),
                    "" if bound is None else jsonfmt.format_float(bound),
                    "true" if passed else "false",
                    "" if lemma_report is None else str(lemma_report.max_nonedge_count),
                    str(2 ** (shell.dim - 1)),
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise TorusSpectraError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_passed and not any_violation else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torus-spectra",
        description="Lattice shells, autocorrelation spectra of squared torus "
        "eigenfunctions, translate-budget sweeps, and sphere-constrained extremization.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker cap (default: ${THREADS_ENV} or CPU count); "
                        "output is identical for any value")
    common.add_argument("--json", action="store_true",
                        help="compact single-line JSON instead of pretty-printed")
    sub = parser.add_subparsers(dest="command", required=True)

    p_shell = sub.add_parser("shell", parents=[common], help="enumerate a lattice shell")
    p_shell.add_argument("--dim", type=int, required=True)
    p_shell.add_argument("--lambda", dest="lam", type=int, required=True)
    p_shell.add_argument("--count-only", action="store_true", help="print only the point count")
    p_shell.set_defaults(fn=cmd_shell)

    p_spec = sub.add_parser("spectrum", parents=[common],
                            help="autocorrelation spectrum and l^p bound check")
    p_spec.add_argument("--dim", type=int, required=True)
    p_spec.add_argument("--lambda", dest="lam", type=int, required=True)
    src = p_spec.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", metavar="FILE", help="coefficient file (JSON)")
    src.add_argument("--random", metavar="MODE",
                     help="uniform | gaussian | sparse[:k] seeded coefficients")
    p_spec.add_argument("--seed", type=int, default=0)
    p_spec.add_argument("--p", type=float, default=None, help="norm exponent (default: dim)")
    p_spec.add_argument("--force-normalize", action="store_true",
                        help="accept badly normalized coefficient files")
    p_spec.set_defaults(fn=cmd_spectrum)

    p_lem = sub.add_parser("lemma", parents=[common], help="translate-budget sweep")
    p_lem.add_argument("--dim", type=int, required=True)
    p_lem.add_argument("--lambda", dest="lam", type=int, required=True)
    p_lem.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p_lem.add_argument("--count", type=int, default=10000,
                       help="valid simplices to check in sampled mode")
    p_lem.add_argument("--seed", type=int, default=0)
    p_lem.add_argument("--extra-points", type=int, default=0,
                       help="check dim + E points against the same budget")
    p_lem.set_defaults(fn=cmd_lemma)

    p_ext = sub.add_parser("extremize", parents=[common],
                           help="maximize the l^p spectrum norm on the amplitude sphere")
    p_ext.add_argument("--dim", type=int, required=True)
    p_ext.add_argument("--lambda", dest="lam", type=int, required=True)
    p_ext.add_argument("--p", type=float, default=None, help="norm exponent (default: dim)")
    p_ext.add_argument("--restarts", type=int, default=10)
    p_ext.add_argument("--iters", type=int, default=5000)
    p_ext.add_argument("--seed", type=int, default=0)
    p_ext.set_defaults(fn=cmd_extremize)

    p_sw = sub.add_parser("sweep", parents=[common],
                          help="per-lambda CSV of norms, bounds and translate counts")
    p_sw.add_argument("--dim", type=int, required=True)
    p_sw.add_argument("--lambda-min", type=int, required=True)
    p_sw.add_argument("--lambda-max", type=int, required=True)
    p_sw.add_argument("--out", metavar="FILE.csv", default=None)
    p_sw.add_argument("--random-trials", type=int, default=1)
    p_sw.add_argument("--seed", type=int, default=0)
    p_sw.add_argument("--lemma-sample", type=int, default=None,
                      help="sampled lemma checks per lambda (default: exhaustive when feasible)")
    p_sw.set_defaults(fn=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.threads = _resolve_threads(args.threads)
        return args.fn(args)
    except TorusSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:  # exit 1 is reserved for real bound violations
        import traceback

        traceback.print_exc(file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front-end for the three evaluation paths.

Subcommands
-----------
density           pointwise density of local maxima below a level
expect            expected count on an interval (adaptive quadrature)
asymptotic        large-degree expansion on a canonical interval
montecarlo        simulation estimate on an interval
verify-constants  recompute the frozen reference table and report pass/fail
compare           (n, u) matrix of exact vs asymptotic vs simulation

Conventions
-----------
Levels and interval endpoints accept ``inf`` and ``-inf``.  Intervals are
given either as ``lo,hi`` or by canonical name: ``pos-tail`` (1, inf),
``neg-tail`` (-inf, -1), ``unit`` (0, 1), ``neg-unit`` (-1, 0).  Increment
deviations default to 1 for every k; ``--sigma-file`` (one value per line,
length n) feeds the general model to the exact and simulation engines.
The expansion covers only the unit-deviation model and exits with code 2
for any other.

Every subcommand accepts ``--json``.  JSON output is deterministic — the
wall-time field stays null unless ``--timing`` is given — and validates
against the schema files shipped in ``rice_maxima/schema``.  Infinities
are serialized as the strings ``"inf"`` and ``"-inf"``.  The environment
variable ``RICE_MAXIMA_THREADS``, when set to a positive integer,
overrides ``--workers``.

Exit codes: 0 success; 1 usage error; 2 degenerate or invalid model;
3 quadrature tolerance not met (the best estimate is still printed);
4 reference verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time

from . import __version__
from .counts import CountQuery, expected_count
from .density import maxima_density
from .errors import (
    DegenerateCovariance,
    DegenerateModel,
    NonFiniteResult,
    ToleranceNotMet,
    VerificationFailure,
)
from .expansion import FAMILY_BOUNDS, FAMILY_INTERVALS, theorem_expansion
from .model import PolynomialModel
from .montecarlo import MCConfig, estimate_em, estimate_many
from .reference import verify_constants

__all__ = ["build_parser", "main"]

_NAME_TO_FAMILY = {name: fam for fam, name in FAMILY_INTERVALS.items()}
_BOUNDS_TO_FAMILY = {bounds: fam for fam, bounds in FAMILY_BOUNDS.items()}

_OK, _USAGE, _DEGENERATE, _TOLERANCE, _VERIFY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 (not 2) on usage errors and
    accepts ``-inf`` / ``-1,0``-style tokens as option values."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-(\d|\.\d|inf)", re.IGNORECASE)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument types


def _level(text: str) -> float:
    lowered = text.strip().lower()
    if lowered in {"inf", "+inf", "infinity"}:
        return math.inf
    if lowered in {"-inf", "-infinity"}:
        return -math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(value):
        raise argparse.ArgumentTypeError("NaN is not a valid value")
    return value


def _finite(text: str) -> float:
    value = _level(text)
    if math.isinf(value):
        raise argparse.ArgumentTypeError("a finite value is required here")
    return value


def _interval(text: str) -> tuple[float, float]:
    lowered = text.strip().lower()
    if lowered in _NAME_TO_FAMILY:
        return FAMILY_BOUNDS[_NAME_TO_FAMILY[lowered]]
    parts = text.split(",")
    if len(parts) != 2:
        names = ", ".join(sorted(_NAME_TO_FAMILY))
        raise argparse.ArgumentTypeError(
            f"expected 'lo,hi' or one of [{names}], got {text!r}"
        )
    lo, hi = _level(parts[0]), _level(parts[1])
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"interval needs lo < hi, got {text!r}")
    return lo, hi


def _degree(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    return value


def _positive_int(text: str) -> int:
    value = _degree(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    value = _degree(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = _finite(text)
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return value


def _int_list(text: str) -> tuple[int, ...]:
    items = tuple(_positive_int(part) for part in text.split(",") if part.strip())
    if not items:
        raise argparse.ArgumentTypeError("the list must not be empty")
    return items


def _level_list(text: str) -> tuple[float, ...]:
    items = tuple(_level(part) for part in text.split(",") if part.strip())
    if not items:
        raise argparse.ArgumentTypeError("the list must not be empty")
    return items


# ---------------------------------------------------------------------------
# shared helpers


def _load_model(degree: int, sigma_file: str | None) -> PolynomialModel:
    if sigma_file is None:
        return PolynomialModel(degree)
    values = []
    with open(sigma_file, encoding="utf-8") as handle:
        for line in handle:
            stripped = line.strip()
            if stripped:
                values.append(float(stripped))
    return PolynomialModel(degree, sigma=tuple(values))


def _sigma_source(sigma_file: str | None) -> str:
    return "unit" if sigma_file is None else sigma_file


def _is_unit(model: PolynomialModel) -> bool:
    return model.sigma0 == 0.0 and all(s == 1.0 for s in model.sigma)


def _workers(flag_value: int) -> int:
    env = os.environ.get("RICE_MAXIMA_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            value = 0
        if value >= 1:
            return value
        print(
            f"warning: ignoring RICE_MAXIMA_THREADS={env!r} "
            "(need a positive integer)",
            file=sys.stderr,
        )
    return flag_value


def _jsonable(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return value


def _emit_json(record: dict) -> None:
    print(json.dumps(_jsonable(record), indent=2))


def _run_record(command, model, sigma_file, interval, u, results, wall):
    return {
        "command": command,
        "model": {"n": model.degree, "sigma": _sigma_source(sigma_file)},
        "query": {"interval": [interval[0], interval[1]], "u": u},
        "results": results,
        "version": __version__,
        "wall_time": wall,
    }


def _print_timing(wall: float | None) -> None:
    if wall is not None:
        print(f"wall time: {wall:.3f} s", file=sys.stderr)


def _family_for(interval: tuple[float, float]) -> int | None:
    return _BOUNDS_TO_FAMILY.get(interval)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_density(args) -> int:
    model = _load_model(args.n, args.sigma_file)
    start = time.perf_counter()
    value = maxima_density(model, args.x, args.u)
    wall = time.perf_counter() - start if args.timing else None
    results = [{"method": "density", "value": value, "abs_error": None, "stderr": None}]
    if args.json:
        _emit_json(
            _run_record(
                "density", model, args.sigma_file, (args.x, args.x), args.u, results, wall
            )
        )
    else:
        print(f"{value:.17g}")
    _print_timing(wall)
    return _OK


def _cmd_expect(args) -> int:
    model = _load_model(args.n, args.sigma_file)
    lo, hi = args.interval
    query = CountQuery(lo, hi, args.u)
    code = _OK
    start = time.perf_counter()
    try:
        result = expected_count(model, query, rel_tol=args.rel_tol)
    except ToleranceNotMet as exc:
        if exc.result is None:
            raise
        print(f"warning: {exc}", file=sys.stderr)
        result = exc.result
        code = _TOLERANCE
    wall = time.perf_counter() - start if args.timing else None
    results = [
        {
            "method": result.method,
            "value": float(result.value),
            "abs_error": float(result.abs_error),
            "stderr": None,
        }
    ]
    if args.json:
        _emit_json(
            _run_record("expect", model, args.sigma_file, (lo, hi), args.u, results, wall)
        )
    else:
        print(f"{result.value:.17g} +- {result.abs_error:.3g}")
    _print_timing(wall)
    return code


def _cmd_asymptotic(args) -> int:
    family = _family_for(args.interval)
    if family is None:
        print(
            "error: the expansion is defined on the four canonical intervals "
            "only (pos-tail, neg-tail, unit, neg-unit)",
            file=sys.stderr,
        )
        return _USAGE
    model = _load_model(args.n, args.sigma_file)
    if not _is_unit(model):
        print(
            "error: the expansion covers only unit increment deviations",
            file=sys.stderr,
        )
        return _DEGENERATE
    start = time.perf_counter()
    expansion = theorem_expansion(family, args.n, args.u)
    value = expansion.assembled_value(args.n, args.u)
    wall = time.perf_counter() - start if args.timing else None
    if expansion.warned:
        print(
            f"warning: u={args.u:g} is outside the validity scale "
            f"({expansion.validity})",
            file=sys.stderr,
        )
    results = [
        {"method": "expansion", "value": value, "abs_error": None, "stderr": None}
    ]
    if args.json:
        _emit_json(
            _run_record(
                "asymptotic",
                model,
                args.sigma_file,
                args.interval,
                args.u,
                results,
                wall,
            )
        )
    else:
        if family in (1, 3):
            scale = 1.0 / (2.0 * (args.n * math.pi) ** 1.5)
            power = 1.5
        else:
            scale = 1.0 / (2.0 * math.pi * math.sqrt(args.n * math.pi))
            power = 0.5
        log_part = (
            expansion.log_coefficient * math.log(args.n**power / args.u)
            if expansion.log_coefficient
            else 0.0
        )
        print(f"{value:.17g}")
        print(f"  log term : {log_part:.17g} (coefficient {expansion.log_coefficient:.12g})")
        print(f"  constant : {expansion.constant:.17g}")
        print(
            f"  u term   : {expansion.u_coefficient * args.u * scale:.17g} "
            f"(coefficient {expansion.u_coefficient:.12g})"
        )
        print(f"  {expansion.validity}")
    _print_timing(wall)
    return _OK


def _cmd_montecarlo(args) -> int:
    model = _load_model(args.n, args.sigma_file)
    lo, hi = args.interval
    config = MCConfig(
        trials=args.trials,
        seed=args.seed,
        points_per_unit=args.points_per_unit,
        workers=_workers(args.workers),
        batch_size=args.batch_size,
    )
    start = time.perf_counter()
    estimate = estimate_em(model, lo, hi, args.u, config)
    wall = time.perf_counter() - start if args.timing else None
    results = [
        {
            "method": "monte-carlo",
            "value": float(estimate.mean),
            "abs_error": None,
            "stderr": float(estimate.stderr),
        }
    ]
    if args.json:
        _emit_json(
            _run_record(
                "montecarlo", model, args.sigma_file, (lo, hi), args.u, results, wall
            )
        )
    else:
        print(
            f"{estimate.mean:.17g} +- {estimate.stderr:.3g} "
            f"(trials={estimate.trials}, seed={estimate.seed})"
        )
    _print_timing(wall)
    return _OK


def _cmd_verify_constants(args) -> int:
    start = time.perf_counter()
    rows = verify_constants(args.rel_tol)
    wall = time.perf_counter() - start if args.timing else None
    failed = sum(1 for row in rows if not row.passed)
    if args.json:
        record = {
            "command": "verify-constants",
            "rows": [
                {
                    "name": row.name,
                    "computed": row.computed,
                    "reference": row.reference,
                    "diff": row.diff,
                    "tolerance": row.tolerance,
                    "passed": row.passed,
                }
                for row in rows
            ],
            "all_passed": failed == 0,
            "version": __version__,
            "wall_time": wall,
        }
        _emit_json(record)
    else:
        header = (
            f"{'name':<26} {'computed':>18} {'reference':>18} "
            f"{'diff':>10} {'tol':>8} status"
        )
        print(header)
        print("-" * len(header))
        for row in rows:
            print(
                f"{row.name:<26} {row.computed:>18.12g} {row.reference:>18.12g} "
                f"{row.diff:>10.2e} {row.tolerance:>8.0e} "
                f"{'pass' if row.passed else 'FAIL'}"
            )
        print(f"{len(rows) - failed} of {len(rows)} rows within tolerance")
    _print_timing(wall)
    return _OK if failed == 0 else _VERIFY


def _cmd_compare(args) -> int:
    lo, hi = args.interval
    family = _family_for(args.interval)
    workers = _workers(args.workers)
    start = time.perf_counter()
    cells = []
    for n in args.n_list:
        model = _load_model(n, args.sigma_file)
        config = MCConfig(
            trials=args.trials,
            seed=args.seed,
            points_per_unit=args.points_per_unit,
            workers=workers,
            batch_size=args.batch_size,
        )
        estimates = estimate_many(model, lo, hi, args.u_list, config)
        for u, estimate in zip(args.u_list, estimates):
            try:
                exact = expected_count(model, CountQuery(lo, hi, u), rel_tol=args.rel_tol)
            except ToleranceNotMet as exc:
                print(f"warning: n={n} u={u:g}: {exc}", file=sys.stderr)
                exact = exc.result
            asymptotic = None
            if family is not None and _is_unit(model) and 0.0 < u < math.inf:
                expansion = theorem_expansion(family, n, u)
                asymptotic = expansion.assembled_value(n, u)
            cells.append(
                {
                    "n": n,
                    "u": float(u),
                    "exact": float(exact.value),
                    "exact_err": float(exact.abs_error),
                    "asymptotic": asymptotic,
                    "mc_mean": float(estimate.mean),
                    "mc_stderr": float(estimate.stderr),
                }
            )
    wall = time.perf_counter() - start if args.timing else None
    if args.json:
        record = {
            "command": "compare",
            "model": {"n": list(args.n_list), "sigma": _sigma_source(args.sigma_file)},
            "query": {"interval": [lo, hi], "u": list(args.u_list)},
            "cells": cells,
            "version": __version__,
            "wall_time": wall,
        }
        _emit_json(record)
    else:
        print("n,u,exact,exact_err,asymptotic,mc_mean,mc_stderr")
        for cell in cells:
            fields = [
                str(cell["n"]),
                repr(cell["u"]),
                repr(cell["exact"]),
                repr(cell["exact_err"]),
                "" if cell["asymptotic"] is None else repr(cell["asymptotic"]),
                repr(cell["mc_mean"]),
                repr(cell["mc_stderr"]),
            ]
            print(",".join(fields))
    _print_timing(wall)
    return _OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rice-maxima",
        description=(
            "Expected local maxima below a level for random polynomials "
            "whose coefficients form a Gaussian random walk."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="emit a JSON record instead of text"
    )
    common.add_argument(
        "--timing",
        action="store_true",
        help="measure wall time (JSON wall_time stays null without this)",
    )
    sigma = argparse.ArgumentParser(add_help=False)
    sigma.add_argument(
        "--sigma-file",
        metavar="PATH",
        help="increment standard deviations, one per line, length n",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser(
        "density",
        parents=[common, sigma],
        help="pointwise density of local maxima below a level",
    )
    p.add_argument("--n", type=_positive_int, required=True, help="polynomial degree")
    p.add_argument("--u", type=_level, required=True, help="level (inf/-inf allowed)")
    p.add_argument("--x", type=_finite, required=True, help="evaluation point")
    p.set_defaults(func=_cmd_density)

    p = subparsers.add_parser(
        "expect",
        parents=[common, sigma],
        help="expected count on an interval by adaptive quadrature",
    )
    p.add_argument("--n", type=_positive_int, required=True, help="polynomial degree")
    p.add_argument("--u", type=_level, required=True, help="level (inf/-inf allowed)")
    p.add_argument(
        "--interval",
        type=_interval,
        required=True,
        help="'lo,hi' or pos-tail | neg-tail | unit | neg-unit",
    )
    p.add_argument(
        "--rel-tol", type=_positive_float, default=1e-8, help="relative tolerance"
    )
    p.set_defaults(func=_cmd_expect)

    p = subparsers.add_parser(
        "asymptotic",
        parents=[common, sigma],
        help="large-degree expansion on a canonical interval",
    )
    p.add_argument("--n", type=_positive_int, required=True, help="polynomial degree")
    p.add_argument("--u", type=_level, required=True, help="level (finite, > 0)")
    p.add_argument(
        "--interval",
        type=_interval,
        required=True,
        help="pos-tail | neg-tail | unit | neg-unit (or the same bounds as 'lo,hi')",
    )
    p.set_defaults(func=_cmd_asymptotic)

    p = subparsers.add_parser(
        "montecarlo",
        parents=[common, sigma],
        help="simulation estimate on an interval",
    )
    p.add_argument("--n", type=_positive_int, required=True, help="polynomial degree")
    p.add_argument("--u", type=_level, required=True, help="level (inf/-inf allowed)")
    p.add_argument(
        "--interval",
        type=_interval,
        required=True,
        help="'lo,hi' or pos-tail | neg-tail | unit | neg-unit",
    )
    p.add_argument("--trials", type=_positive_int, default=10000, help="sample size")
    p.add_argument("--seed", type=_nonnegative_int, default=0, help="base seed")
    p.add_argument(
        "--workers",
        type=_positive_int,
        default=1,
        help="worker threads (RICE_MAXIMA_THREADS overrides)",
    )
    p.add_argument(
        "--points-per-unit",
        type=_positive_int,
        default=512,
        help="critical-point scan resolution",
    )
    p.add_argument(
        "--batch-size", type=_positive_int, default=256, help="trials per work unit"
    )
    p.set_defaults(func=_cmd_montecarlo)

    p = subparsers.add_parser(
        "verify-constants",
        parents=[common],
        help="recompute the frozen reference table and report pass/fail",
    )
    p.add_argument(
        "--rel-tol",
        type=_positive_float,
        default=None,
        help="replace the per-row absolute tolerances with rel-tol * |reference|",
    )
    p.set_defaults(func=_cmd_verify_constants)

    p = subparsers.add_parser(
        "compare",
        parents=[common, sigma],
        help="(n, u) matrix of exact vs asymptotic vs simulation (CSV by default)",
    )
    p.add_argument(
        "--n-list",
        type=_int_list,
        required=True,
        help="comma-separated degrees, e.g. 200,500,1000",
    )
    p.add_argument(
        "--u-list",
        type=_level_list,
        required=True,
        help="comma-separated levels (inf allowed)",
    )
    p.add_argument(
        "--interval",
        type=_interval,
        required=True,
        help="'lo,hi' or pos-tail | neg-tail | unit | neg-unit",
    )
    p.add_argument("--trials", type=_positive_int, default=20000, help="sample size")
    p.add_argument("--seed", type=_nonnegative_int, default=0, help="base seed")
    p.add_argument(
        "--workers",
        type=_positive_int,
        default=1,
        help="worker threads (RICE_MAXIMA_THREADS overrides)",
    )
    p.add_argument(
        "--points-per-unit",
        type=_positive_int,
        default=512,
        help="critical-point scan resolution",
    )
    p.add_argument(
        "--batch-size", type=_positive_int, default=256, help="trials per work unit"
    )
    p.add_argument(
        "--rel-tol",
        type=_positive_float,
        default=1e-8,
        help="relative tolerance for the exact column",
    )
    p.set_defaults(func=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else _USAGE
    try:
        return args.func(args)
    except (DegenerateModel, DegenerateCovariance) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _DEGENERATE
    except NonFiniteResult as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _DEGENERATE
    except ToleranceNotMet as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _TOLERANCE
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _VERIFY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE


if __name__ == "__main__":
    sys.exit(main())

"""``symtest`` command-line front end.

Exit codes: 0 completed (whichever decision), 2 usage error, 3 data error,
4 numeric failure or hull violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import _config
from .bootstrap import bootstrap_critical_region, null_critical_region, scr_test
from .characterization import DEFAULT_TOL, characterize
from .competitors import ROW_STATISTICS, competitor_region, competitor_test
from .errors import (
    DegenerateSampleError,
    HullError,
    NumericError,
    ParameterDomainError,
    ParseError,
    SampleSizeError,
    SymTestError,
)
from .estimator import as_sample
from .fixtures import FIXTURES
from .grammar import parse_family
from .jel import ajel_statistic, jel_statistic
from .outcome import TestOutcome
from .rng import RandomStream
from .simulation import (
    FORMATS,
    REJECT_ON_HULL,
    SKIP_ON_HULL,
    SimulationConfig,
    emit_table,
    run_study,
)
from .special import chi2_quantile_1df, chi2_sf_1df

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

TEST_JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "symtest test result",
    "type": "object",
    "required": ["method", "n", "statistic", "alpha", "reject", "seed"],
    "properties": {
        "method": {"enum": ["JEL", "AJEL", "SCR", "SGN", "CM", "MGG"]},
        "n": {"type": "integer", "minimum": 1},
        "statistic": {"type": ["number", "null"]},
        "p_value": {"type": "number", "minimum": 0, "maximum": 1},
        "c1": {"type": "number"},
        "c2": {"type": "number"},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "reject": {"type": "boolean"},
        "seed": {"type": "integer", "minimum": 0},
        "decision": {"enum": ["Reject H0", "Accept H0", "Inconclusive"]},
        "inconclusive": {"type": "boolean"},
    },
}


class DataFileError(SymTestError):
    """Unreadable or malformed input data."""


class UsageError(SymTestError):
    pass


@dataclass(frozen=True)
class DataFile:
    path: str
    values: np.ndarray
    source: str  # "plain" or "csv"


def read_data(path: str, column: Optional[int] = None) -> DataFile:
    """Read one real per line, or column ``column`` (1-based) of a CSV file.

    Blank lines and lines starting with ``#`` are skipped; anything else
    that is not a number is an error naming the line.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataFileError(f"cannot read {path}: {exc.strerror or exc}") from None
    if column is not None and column < 1:
        raise UsageError(f"--column is 1-based, got {column}")
    values = []
    lines = text.splitlines()
    rows = csv.reader(lines) if column is not None else ([ln] for ln in lines)
    for lineno, (raw, rec) in enumerate(zip(lines, rows), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if column is not None:
            if len(rec) < column:
                raise DataFileError(f"{path}:{lineno}: has {len(rec)} field(s), --column {column} requested")
            field = rec[column - 1].strip()
        else:
            field = stripped
        try:
            v = float(field)
        except ValueError:
            raise DataFileError(f"{path}:{lineno}: not a number: {field!r}") from None
        if not math.isfinite(v):
            raise DataFileError(f"{path}:{lineno}: value is not finite: {field!r}")
        values.append(v)
    return DataFile(path, np.asarray(values, dtype=float), "plain" if column is None else "csv")


def _fmt(x) -> str:
    if x is None:
        return "-"
    return f"{x:.6g}"


def _seed(args) -> int:
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise UsageError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
        return args.seed
    try:
        return _config.default_seed()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args) -> np.ndarray:
    if (args.input is None) == (args.fixture is None):
        raise UsageError("give exactly one of --input PATH or --fixture NAME")
    if args.fixture is not None:
        return np.array(FIXTURES[args.fixture])
    return read_data(args.input, args.column).values


def _emit(payload: dict, as_json: bool, human: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(payload))
    else:
        for line in human:
            print(line)


# -- test ----------------------------------------------------------------------


def _chi2_outcome(method, sol, alpha, n) -> TestOutcome:
    stat = sol.neg2_log_ratio
    return TestOutcome(method, stat, alpha, bool(stat > chi2_quantile_1df(1 - alpha)), n, p_value=chi2_sf_1df(stat))


def cmd_test(args) -> int:
    seed = _seed(args)
    method = args.method.upper()
    data = _load(args)
    sample = as_sample(data)
    if method == "JEL":
        outcome = _chi2_outcome(method, jel_statistic(sample), args.alpha, sample.n)
    elif method == "AJEL":
        outcome = _chi2_outcome(method, ajel_statistic(sample), args.alpha, sample.n)
    elif method == "SCR":
        outcome = scr_test(sample, args.bootstrap_reps, args.alpha, RandomStream(seed))
    else:
        null = parse_family(args.calibration)
        region = competitor_region(method, null, sample.n, args.bootstrap_reps, args.alpha, RandomStream(seed))
        outcome = competitor_test(method, sample, args.alpha, region)
        if outcome.inconclusive:
            raise DegenerateSampleError(outcome.detail)

    payload = {
        "method": outcome.method,
        "n": outcome.n,
        "statistic": outcome.statistic,
        "alpha": outcome.alpha,
        "reject": outcome.reject,
        "seed": seed,
        "decision": outcome.decision,
    }
    lines = [f"method     {outcome.method}", f"n          {outcome.n}", f"statistic  {_fmt(outcome.statistic)}"]
    if outcome.p_value is not None:
        payload["p_value"] = outcome.p_value
        lines.append(f"p-value    {_fmt(outcome.p_value)}")
    else:
        payload["c1"], payload["c2"] = outcome.critical_lower, outcome.critical_upper
        lines.append(f"bounds     [{_fmt(outcome.critical_lower)}, {_fmt(outcome.critical_upper)}]")
    lines += [f"alpha      {_fmt(outcome.alpha)}", f"decision   {outcome.decision}"]
    _emit(payload, args.json, lines)
    return EXIT_OK


# -- simulate ------------------------------------------------------------------


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_simulate(args) -> int:
    seed = _seed(args)
    families = [parse_family(f) for f in args.family]
    methods = tuple(m.strip().upper() for m in args.methods.split(",") if m.strip())
    calibration = None if args.calibration.strip().lower() == "self" else parse_family(args.calibration)
    policy = {"reject": REJECT_ON_HULL, "skip": SKIP_ON_HULL}[args.hull_policy]
    config = SimulationConfig(
        families=families,
        sample_sizes=_int_list(args.n),
        methods=methods,
        reps=args.reps,
        alpha=args.alpha,
        master_seed=seed,
        scr_B=args.scr_B,
        calibration_null=calibration,
        hull_policy=policy,
        workers=args.workers,
    )
    progress = lambda fam, n: print(f"done {fam} n={n}", file=sys.stderr)
    table = run_study(config, on_progress=progress)
    text = emit_table(table, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{len(table.rows)} cell(s), {len(table.failures)} failure(s), reps={config.reps}, seed={seed}", file=sys.stderr)
    for f in table.failures:
        print(f"failed: {f.family} n={f.n} {f.method}: {f.message}", file=sys.stderr)
    return EXIT_NUMERIC if table.failures else EXIT_OK


# -- characterize --------------------------------------------------------------


def cmd_characterize(args) -> int:
    spec = parse_family(args.dist)
    if not args.tol > 0:
        raise UsageError(f"--tol must be positive, got {args.tol}")
    rep = characterize(spec, args.tol, with_variance=args.with_variance)
    payload = {
        "family": spec.label,
        "gcre": rep.gcre,
        "gce": rep.gce,
        "delta": rep.delta,
        "tol": rep.quadrature_tolerance,
        "symmetric": rep.symmetric_verdict,
    }
    lines = [
        f"family     {spec.label}",
        f"gcre       {_fmt(rep.gcre)}",
        f"gce        {_fmt(rep.gce)}",
        f"delta      {_fmt(rep.delta)}",
        f"symmetric  {'yes' if rep.symmetric_verdict else 'no'} (|delta| < 10*tol = {_fmt(10 * rep.quadrature_tolerance)})",
    ]
    if args.with_variance:
        payload["var_k"] = rep.asymptotic_variance
        payload["projection_variance"] = rep.projection_variance
        lines.append(f"Var(K)     {_fmt(rep.asymptotic_variance)}")
        lines.append(f"9 Var(h1)  {_fmt(rep.projection_variance)}")
    _emit(payload, args.json, lines)
    return EXIT_OK


# -- critical ------------------------------------------------------------------


def cmd_critical(args) -> int:
    seed = _seed(args)
    stream = RandomStream(seed)
    statistic = args.statistic.upper()
    if args.input is not None:
        if args.null is not None or args.n is not None:
            raise UsageError("--input cannot be combined with --null/--n")
        if statistic != "SCR":
            raise UsageError("the data bootstrap is only defined for the SCR statistic")
        data = read_data(args.input, args.column).values
        region = bootstrap_critical_region(data, args.B or 1000, args.alpha, stream)
    else:
        if args.null is None or args.n is None:
            raise UsageError("give --input PATH, or both --null SPEC and --n N")
        null = parse_family(args.null)
        B = args.B or 10_000
        if statistic == "SCR":
            region = null_critical_region(null, args.n, B, args.alpha, stream)
        else:
            region = competitor_region(statistic, null, args.n, B, args.alpha, stream)
    payload = {
        "statistic": statistic,
        "c1": region.c1,
        "c2": region.c2,
        "source": region.source,
        "B": region.replicates,
        "alpha": region.alpha,
        "seed": seed,
    }
    lines = [
        f"C1      {_fmt(region.c1)}",
        f"C2      {_fmt(region.c2)}",
        f"source  {region.source}",
        f"B       {region.replicates}",
        f"alpha   {_fmt(region.alpha)}",
    ]
    _emit(payload, args.json, lines)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _alpha(text: str) -> float:
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < a < 1:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {text}")
    return a


def _seed_arg(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symtest", description="Entropy-based tests of symmetry.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="test a sample for symmetry")
    t.add_argument("--input", metavar="PATH")
    t.add_argument("--fixture", choices=sorted(FIXTURES))
    t.add_argument("--column", type=int, metavar="K", help="CSV column, 1-based")
    t.add_argument("--method", type=str.lower, choices=["jel", "ajel", "scr", "sgn", "cm", "mgg"], default="jel")
    t.add_argument("--alpha", type=_alpha, default=0.05)
    t.add_argument("--bootstrap-reps", type=int, default=1000)
    t.add_argument("--calibration", default="normal(0,1)", metavar="SPEC", help="null family for SGN/CM/MGG")
    t.add_argument("--seed", type=_seed_arg)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_test)

    s = sub.add_parser("simulate", help="Monte Carlo size/power study")
    s.add_argument("--family", action="append", required=True, metavar="SPEC")
    s.add_argument("--n", default="25,50,100,200", metavar="LIST")
    s.add_argument("--methods", default="JEL,AJEL,SCR", metavar="LIST")
    s.add_argument("--reps", type=int, default=10_000)
    s.add_argument("--alpha", type=_alpha, default=0.05)
    s.add_argument("--seed", type=_seed_arg)
    s.add_argument("--out", metavar="PATH")
    s.add_argument("--format", choices=FORMATS, default="csv")
    s.add_argument("--calibration", default="normal(0,1)", metavar="SPEC", help="null family, or 'self'")
    s.add_argument("--hull-policy", choices=["reject", "skip"], default="reject")
    s.add_argument("--scr-B", dest="scr_B", type=int, default=10_000)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("characterize", help="population gcre, gce and delta by quadrature")
    c.add_argument("--dist", required=True, metavar="SPEC")
    c.add_argument("--tol", type=float, default=DEFAULT_TOL)
    c.add_argument("--with-variance", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_characterize)

    k = sub.add_parser("critical", help="simulated critical region")
    k.add_argument("--input", metavar="PATH")
    k.add_argument("--column", type=int, metavar="K")
    k.add_argument("--null", metavar="SPEC")
    k.add_argument("--n", type=int)
    k.add_argument("--B", type=int)
    k.add_argument("--alpha", type=_alpha, default=0.05)
    k.add_argument("--statistic", type=str.lower, choices=["scr", *[m.lower() for m in ROW_STATISTICS]], default="scr")
    k.add_argument("--seed", type=_seed_arg)
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_critical)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, ParameterDomainError) as exc:
        print(f"symtest: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFileError, SampleSizeError, DegenerateSampleError) as exc:
        print(f"symtest: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (HullError, NumericError) as exc:
        print(f"symtest: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

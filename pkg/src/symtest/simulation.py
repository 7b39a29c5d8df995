"""Monte Carlo harness for empirical size and power.

Replication ``k`` of family ``i`` at sample size ``n`` draws its sample from
``RandomStream(master_seed, derive_stream_id(i, n, k))``. Every method in a
study sees that same sample, so columns are paired, and no method touches
the stream, so results do not depend on which methods run or how the
replications are split across workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import _kernels
from .bootstrap import CriticalRegion, null_critical_region
from .competitors import ROW_STATISTICS
from .distributions import Distribution, Normal
from .errors import ParameterDomainError
from .jel import ajel_rows, jel_rows
from .outcome import METHODS
from .rng import RandomStream, derive_stream_id
from .special import chi2_quantile_1df

REJECT_ON_HULL = "RejectOnHullViolation"
SKIP_ON_HULL = "SkipOnHullViolation"
HULL_POLICIES = (REJECT_ON_HULL, SKIP_ON_HULL)

CALIBRATION_TAG = 0x5C5CA1
_CHUNK = 512

# rows -> (reject, inconclusive), both boolean arrays of length len(rows)
RowMethod = Callable[[np.ndarray], tuple]


@dataclass(frozen=True)
class SimulationConfig:
    """Grid and settings of a simulation study.

    ``calibration_null`` is the symmetric law used to simulate critical
    regions for SCR and the competitor statistics. ``None`` calibrates each
    family against itself, which is only allowed for symmetric families and
    is how null sizes are measured for families other than the reference
    null. ``custom_methods`` maps extra method names to row functions and is
    meant for instrumentation.
    """

    families: tuple
    sample_sizes: tuple
    methods: tuple
    reps: int = 10_000
    alpha: float = 0.05
    master_seed: int = 0
    scr_B: int = 10_000
    calibration_null: Optional[Distribution] = Normal(0.0, 1.0)
    hull_policy: str = REJECT_ON_HULL
    workers: int = 1
    custom_methods: Mapping[str, RowMethod] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.families:
            raise ParameterDomainError("families must be nonempty")
        if not self.sample_sizes:
            raise ParameterDomainError("sample_sizes must be nonempty")
        if any(n < 5 for n in self.sample_sizes):
            raise ParameterDomainError(f"every sample size must be >= 5, got {self.sample_sizes}")
        if not self.methods:
            raise ParameterDomainError("methods must be nonempty")
        for m in self.methods:
            if m not in METHODS and m not in self.custom_methods:
                raise ParameterDomainError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
        if int(self.reps) < 100:
            raise ParameterDomainError(f"reps must be >= 100, got {self.reps!r}")
        if not 0 < self.alpha < 1:
            raise ParameterDomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ParameterDomainError("master_seed must be an unsigned 64-bit integer")
        if int(self.scr_B) < 1000:
            raise ParameterDomainError(f"scr_B must be >= 1000, got {self.scr_B!r}")
        if self.hull_policy not in HULL_POLICIES:
            raise ParameterDomainError(f"hull_policy must be one of {HULL_POLICIES}, got {self.hull_policy!r}")
        if int(self.workers) < 1:
            raise ParameterDomainError(f"workers must be >= 1, got {self.workers!r}")
        if self.calibration_null is not None and not self.calibration_null.is_symmetric:
            raise ParameterDomainError(f"calibration null {self.calibration_null.label} is not symmetric")


@dataclass(frozen=True)
class ResultRow:
    family: str
    n: int
    method: str
    rate: float
    stderr: float
    inconclusive: int


@dataclass(frozen=True)
class CellFailure:
    family: str
    n: int
    method: str
    message: str


@dataclass
class ResultTable:
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def rate(self, family: str, n: int, method: str) -> ResultRow:
        for r in self.rows:
            if r.family == family and r.n == n and r.method == method:
                return r
        raise KeyError((family, n, method))


def mc_stderr(rate: float, reps: int) -> float:
    return math.sqrt(rate * (1.0 - rate) / reps)


# -- per-chunk evaluation ----------------------------------------------------


def _sample_rows(spec: Distribution, family_index: int, n: int, start: int, stop: int, seed: int) -> np.ndarray:
    rows = np.empty((stop - start, n))
    for j, k in enumerate(range(start, stop)):
        rows[j] = spec.sample(RandomStream(seed, derive_stream_id(family_index, n, k)), n)
    rows.sort(axis=1)
    return rows


def _jel_decisions(rows, alpha, policy):
    crit = chi2_quantile_1df(1.0 - alpha)
    stat, status, mean = jel_rows(rows)
    ok = status == _kernels.EL_OK
    reject = ok & (stat > crit)
    hull = status == _kernels.EL_HULL
    if policy == REJECT_ON_HULL:
        reject |= hull & (mean != 0.0)
    return reject, ~ok


def _ajel_decisions(rows, alpha):
    stat, status = ajel_rows(rows)
    ok = status == _kernels.EL_OK
    return ok & (stat > chi2_quantile_1df(1.0 - alpha)), ~ok


def _region_decisions(stat, region: CriticalRegion):
    ok = np.isfinite(stat)
    with np.errstate(invalid="ignore"):
        reject = ok & ((stat < region.c1) | (stat > region.c2))
    return reject, ~ok


def _row_statistic(method: str):
    return _kernels.delta_rows if method == "SCR" else ROW_STATISTICS[method]


@dataclass
class _Cell:
    """Counts for one (family, n) block, all methods together."""

    rejections: dict
    inconclusive: dict


def _evaluate_chunk(rows, methods, config, regions) -> _Cell:
    rej, inc = {}, {}
    for m in methods:
        if m in config.custom_methods:
            r, i = config.custom_methods[m](rows)
        elif m == "JEL":
            r, i = _jel_decisions(rows, config.alpha, config.hull_policy)
        elif m == "AJEL":
            r, i = _ajel_decisions(rows, config.alpha)
        else:
            r, i = _region_decisions(np.asarray(_row_statistic(m)(rows), dtype=float), regions[m])
        rej[m] = int(np.count_nonzero(r))
        inc[m] = int(np.count_nonzero(i))
    return _Cell(rej, inc)


# -- calibration -------------------------------------------------------------


def calibration_region(method: str, null: Distribution, n: int, config: SimulationConfig, tag: int = 0) -> CriticalRegion:
    """Null-simulated region of ``method`` at size ``n``, seeded from the config."""
    stream = RandomStream(config.master_seed, derive_stream_id(CALIBRATION_TAG, METHODS.index(method), n, tag))
    return null_critical_region(null, n, config.scr_B, config.alpha, stream, statistic=_row_statistic(method))


def _calibrator(config: SimulationConfig):
    cache: dict = {}

    def get(method, family_index, spec, n):
        if config.calibration_null is None:
            null, key, tag = spec, (method, family_index, n), family_index + 1
        else:
            null, key, tag = config.calibration_null, (method, n), 0
        if key not in cache:
            cache[key] = calibration_region(method, null, n, config, tag)
        return cache[key]

    return get


# -- driver ------------------------------------------------------------------


def _chunks(reps: int):
    return [(s, min(s + _CHUNK, reps)) for s in range(0, reps, _CHUNK)]


def _run_block(spec, family_index, n, methods, config, regions, pool) -> _Cell:
    def work(bounds):
        rows = _sample_rows(spec, family_index, n, bounds[0], bounds[1], int(config.master_seed))
        return _evaluate_chunk(rows, methods, config, regions)

    parts = list(pool.map(work, _chunks(int(config.reps)))) if pool else [work(b) for b in _chunks(int(config.reps))]
    total = _Cell({m: 0 for m in methods}, {m: 0 for m in methods})
    for p in parts:
        for m in methods:
            total.rejections[m] += p.rejections[m]
            total.inconclusive[m] += p.inconclusive[m]
    return total


def _study(config: SimulationConfig, cells: Iterable, on_progress=None) -> ResultTable:
    table = ResultTable()
    calib = _calibrator(config)
    reps = int(config.reps)
    pool = ThreadPoolExecutor(int(config.workers)) if int(config.workers) > 1 else None
    try:
        for family_index, spec, n in cells:
            label = spec.label
            regions, methods = {}, []
            for m in config.methods:
                if m in ("SCR", "SGN", "CM", "MGG") and m not in config.custom_methods:
                    try:
                        regions[m] = calib(m, family_index, spec, n)
                    except Exception as exc:  # noqa: BLE001 - reported per cell
                        table.failures.append(CellFailure(label, n, m, f"{type(exc).__name__}: {exc}"))
                        continue
                methods.append(m)
            if not methods:
                continue
            try:
                cell = _run_block(spec, family_index, n, methods, config, regions, pool)
            except Exception as exc:  # noqa: BLE001 - reported per cell
                for m in methods:
                    table.failures.append(CellFailure(label, n, m, f"{type(exc).__name__}: {exc}"))
                continue
            for m in methods:
                r = cell.rejections[m] / reps
                table.rows.append(ResultRow(label, n, m, r, mc_stderr(r, reps), cell.inconclusive[m]))
            if on_progress is not None:
                on_progress(label, n)
    finally:
        if pool is not None:
            pool.shutdown()
    return table


def run_study(config: SimulationConfig, on_progress: Optional[Callable[[str, int], None]] = None) -> ResultTable:
    """Evaluate every (family, n, method) cell.

    Failing cells are listed in ``ResultTable.failures`` and the rest of
    the grid still runs.
    """
    cells = [(i, spec, n) for i, spec in enumerate(config.families) for n in config.sample_sizes]
    return _study(config, cells, on_progress)


def estimate_rejection_rate(spec: Distribution, n: int, method: str, config: SimulationConfig):
    """``(rate, stderr, inconclusive)`` for one cell.

    The family index used for seeding is the position of ``spec`` in
    ``config.families`` (0 if absent), so this reproduces the matching cell
    of :func:`run_study`.
    """
    try:
        idx = config.families.index(spec)
    except ValueError:
        idx = 0
    one = SimulationConfig(
        families=(spec,),
        sample_sizes=(n,),
        methods=(method,),
        reps=config.reps,
        alpha=config.alpha,
        master_seed=config.master_seed,
        scr_B=config.scr_B,
        calibration_null=config.calibration_null,
        hull_policy=config.hull_policy,
        workers=config.workers,
        custom_methods=config.custom_methods,
    )
    table = _study(one, [(idx, spec, int(n))])
    if table.failures:
        f = table.failures[0]
        raise RuntimeError(f"cell ({f.family}, {f.n}, {f.method}) failed: {f.message}")
    row = table.rows[0]
    return row.rate, row.stderr, row.inconclusive


# -- output ------------------------------------------------------------------

CSV_HEADER = ("family", "n", "method", "rate", "stderr", "inconclusive")
FORMATS = ("csv", "markdown", "json")


def emit_table(table: ResultTable, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in table.rows:
            w.writerow([r.family, r.n, r.method, repr(r.rate), repr(r.stderr), r.inconclusive])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([r.__dict__ for r in table.rows], indent=2) + "\n"
    if fmt == "markdown":
        return _markdown(table)
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def _markdown(table: ResultTable) -> str:
    methods = list(dict.fromkeys(r.method for r in table.rows))
    blocks = list(dict.fromkeys((r.family, r.n) for r in table.rows))
    cells = {(r.family, r.n, r.method): r for r in table.rows}
    lines = [
        "| family | n | " + " | ".join(methods) + " |",
        "|---|---:|" + "---:|" * len(methods),
    ]
    last = None
    for fam, n in blocks:
        shown = fam if fam != last else ""
        last = fam
        vals = []
        for m in methods:
            r = cells.get((fam, n, m))
            vals.append("" if r is None else f"{r.rate:.3f}" + (f" ({r.inconclusive})" if r.inconclusive else ""))
        lines.append(f"| {shown} | {n} | " + " | ".join(vals) + " |")
    return "\n".join(lines) + "\n"


def parse_csv_table(text: str) -> ResultTable:
    """Inverse of ``emit_table(..., "csv")``."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}, got {header!r}")
    table = ResultTable()
    for lineno, rec in enumerate(reader, start=2):
        if len(rec) != len(CSV_HEADER):
            raise ValueError(f"line {lineno}: expected {len(CSV_HEADER)} fields, got {len(rec)}")
        fam, n, m, rate, se, inc = rec
        table.rows.append(ResultRow(fam, int(n), m, float(rate), float(se), int(inc)))
    return table

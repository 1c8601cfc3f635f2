"""Monte Carlo campaigns over the bandwidth regimes.

A campaign is described by a JSON config (exact key set, unknown keys are
rejected), runs one simulated replicate pipeline per (N, replicate) pair --
sample spacings, uniformize, oscillation modulus, normalized statistics --
and emits analysis-ready CSV tables: per-replicate records, per-N summaries,
and growth-condition verdicts.

Replicate streams are keyed by (base_seed, k, N, replicate), so results are
identical whether replicates run serially or across a process pool; records
are sorted by (N, replicate) before they are emitted.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import modulus, regimes, sampling
from .errors import ConfigError, ResourceLimitError

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "ReplicateRecord",
    "SummaryRow",
    "load_config",
    "load_records_csv",
    "persist",
    "run_experiment",
    "summarize",
    "write_conditions_csv",
    "write_records_csv",
    "write_summary_csv",
]

_CONFIG_KEYS = {
    "regime",
    "c",
    "c_schedule",
    "a_rule",
    "k_mode",
    "k",
    "k_rule",
    "delta",
    "n_grid",
    "replicates",
    "base_seed",
    "out_dir",
    "emit",
}
_EMIT_CHOICES = ("records", "summary", "conditions")
_BUDGET = 10**9  # total exponentials across the whole campaign

RECORD_COLUMNS = (
    "regime,N,k,n,a_N,seed,replicate,mu,lambda,k_n,theta,d_scaled,"
    "target_kind,target_lo,target_hi"
).split(",")
SUMMARY_COLUMNS = (
    "regime,N,count,undefined_count,mean,sd,median,q05,q95,"
    "target_lo,target_hi,gap_or_coverage"
).split(",")
CONDITION_COLUMNS = ["condition", "N", "value", "required", "verdict"]


@dataclass(frozen=True)
class ExperimentConfig:
    spec: regimes.RegimeSpec
    n_grid: tuple[int, ...]
    replicates: int
    base_seed: int
    out_dir: str | None
    emit: tuple[str, ...]

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "regime" not in raw:
            raise ConfigError("config requires 'regime'")
        if "n_grid" not in raw:
            raise ConfigError("config requires 'n_grid'")

        try:
            spec = regimes.RegimeSpec(
                variant=raw["regime"],
                c=None if raw.get("c") is None else float(raw["c"]),
                c_schedule=raw.get("c_schedule"),
                a_rule=raw.get("a_rule"),
                k_mode=raw.get("k_mode", "fixed"),
                k=None if raw.get("k") is None else int(raw["k"]),
                k_rule=raw.get("k_rule"),
                delta=None if raw.get("delta") is None else float(raw["delta"]),
            )
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad regime parameters: {exc}") from exc

        n_grid_raw = raw["n_grid"]
        if not isinstance(n_grid_raw, (list, tuple)) or not n_grid_raw:
            raise ConfigError("n_grid must be a non-empty list of integers")
        try:
            n_grid = tuple(int(n) for n in n_grid_raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"n_grid entries must be integers: {exc}") from exc
        if any(n < 16 for n in n_grid):
            raise ConfigError("n_grid entries must be >= 16")
        if any(n_grid[i] >= n_grid[i + 1] for i in range(len(n_grid) - 1)):
            raise ConfigError("n_grid must be strictly increasing")

        replicates = int(raw.get("replicates", 1))
        if replicates < 1:
            raise ConfigError(f"replicates must be >= 1, got {replicates}")
        base_seed = int(raw.get("base_seed", 0))

        out_dir = raw.get("out_dir")
        if out_dir is not None and not isinstance(out_dir, str):
            raise ConfigError("out_dir must be a string path")

        emit_raw = raw.get("emit")
        if emit_raw is None:
            emit = _EMIT_CHOICES
        else:
            if not isinstance(emit_raw, (list, tuple)) or not emit_raw:
                raise ConfigError("emit must be a non-empty list")
            bad = sorted(set(emit_raw) - set(_EMIT_CHOICES))
            if bad:
                raise ConfigError(
                    f"emit entries must be among {_EMIT_CHOICES}, got {', '.join(bad)}"
                )
            emit = tuple(e for e in _EMIT_CHOICES if e in set(emit_raw))
        return cls(
            spec=spec,
            n_grid=n_grid,
            replicates=replicates,
            base_seed=base_seed,
            out_dir=out_dir,
            emit=emit,
        )


def load_config(path: str | Path) -> ExperimentConfig:
    p = Path(path)
    try:
        raw = json.loads(p.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {p}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
    return ExperimentConfig.from_dict(raw)


@dataclass(frozen=True)
class ReplicateRecord:
    regime: str
    N: int
    k: int
    n: int
    a_N: float
    seed: int
    replicate: int
    mu: float
    lam: float
    k_n: float | None
    theta: float
    d_scaled: float | None
    target_kind: str
    target_lo: float | None
    target_hi: float | None


@dataclass(frozen=True)
class SummaryRow:
    regime: str
    N: int
    count: int
    undefined_count: int
    mean: float
    sd: float
    median: float
    q05: float
    q95: float
    target_lo: float | None
    target_hi: float | None
    gap_or_coverage: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple[ReplicateRecord, ...]
    summary: tuple[SummaryRow, ...]
    conditions: tuple[regimes.ConditionReport, ...]


def _one_replicate(args: tuple) -> ReplicateRecord:
    spec, n_spacings, a, k, replicate, base_seed, target, d_factor = args
    sample = sampling.sample_spacings(k, n_spacings, base_seed, replicate=replicate)
    path = sampling.uniformize(sample).to_path()
    report = modulus.oscillation_modulus(path, a)
    if d_factor is not None:
        # upper-bound regimes track d_N * Lambda, not the LIL ratio
        k_n = None
        d_scaled = d_factor * report.lam
    else:
        b = regimes.limit_normalizer(spec, n_spacings, a)
        k_n = None if b is None else report.lam / b
        d_scaled = None
    return ReplicateRecord(
        regime=spec.variant,
        N=n_spacings,
        k=k,
        n=n_spacings * k - 1,
        a_N=a,
        seed=base_seed,
        replicate=replicate,
        mu=sample.mu,
        lam=report.lam,
        k_n=k_n,
        theta=report.theta,
        d_scaled=d_scaled,
        target_kind=target.kind,
        target_lo=target.lo,
        target_hi=target.hi,
    )


def run_experiment(config: ExperimentConfig, threads: int = 0) -> ExperimentResult:
    """Run the campaign; identical output for any thread count."""
    spec = config.spec
    budget = sum(n * regimes.order_of(spec, n) for n in config.n_grid) * config.replicates
    if budget > _BUDGET:
        raise ResourceLimitError(
            f"campaign needs {budget} exponentials, over the {_BUDGET} cap; "
            "shrink n_grid or replicates"
        )

    target = regimes.limit_target(spec)
    jobs = []
    for n_spacings in config.n_grid:
        a = regimes.bandwidth(spec, n_spacings)
        k = regimes.order_of(spec, n_spacings)
        d_factor = None
        if spec.variant == "IV":
            d_factor = regimes.d_scaling(
                n_spacings, 1.0 / math.log(math.log(n_spacings))
            )
        for rep in range(config.replicates):
            jobs.append(
                (spec, n_spacings, a, k, rep, config.base_seed, target, d_factor)
            )

    if threads < 0:
        raise ConfigError(f"threads must be >= 0, got {threads}")
    workers = threads if threads > 0 else (os.cpu_count() or 1)
    if workers == 1 or len(jobs) == 1:
        records = [_one_replicate(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            records = list(pool.map(_one_replicate, jobs, chunksize=4))
    records.sort(key=lambda r: (r.N, r.replicate))

    summary = summarize(records)
    if len(config.n_grid) >= 2:
        conditions = tuple(regimes.check_conditions(spec, config.n_grid))
    else:
        conditions = ()
    return ExperimentResult(
        config=config,
        records=tuple(records),
        summary=tuple(summary),
        conditions=conditions,
    )


def summarize(
    records: Sequence[ReplicateRecord], interval_margin: float = 0.25
) -> list[SummaryRow]:
    """Per-N statistics of the regime's trend statistic.

    The statistic is k_n for point/interval targets and d_scaled for
    upper-bound targets.  Rows whose normalizer is undefined are excluded
    from the statistics but counted.  Point targets report the gap
    |median - target|; interval targets report coverage of the bracket
    widened by interval_margin on both sides; upper-bound targets report
    the fraction at or below the bound.
    """
    rows: list[SummaryRow] = []
    by_n: dict[tuple[str, int], list[ReplicateRecord]] = {}
    for r in records:
        by_n.setdefault((r.regime, r.N), []).append(r)
    for (regime, n_spacings), group in sorted(by_n.items(), key=lambda kv: kv[0][1]):
        kind = group[0].target_kind
        lo, hi = group[0].target_lo, group[0].target_hi
        if kind == "upper-bound":
            undefined = sum(1 for r in group if r.d_scaled is None)
            vals = np.array(
                [r.d_scaled for r in group if r.d_scaled is not None], dtype=np.float64
            )
        else:
            undefined = sum(1 for r in group if r.k_n is None)
            vals = np.array(
                [r.k_n for r in group if r.k_n is not None], dtype=np.float64
            )
        count = len(vals)
        if count == 0:
            mean = sd = median = q05 = q95 = math.nan
            gap_or_coverage = math.nan
        else:
            mean = float(np.mean(vals))
            sd = 0.0 if count == 1 else float(np.std(vals, ddof=1))
            median = float(np.median(vals))
            q05 = float(np.quantile(vals, 0.05, method="hazen"))
            q95 = float(np.quantile(vals, 0.95, method="hazen"))
            if kind == "point":
                gap_or_coverage = abs(median - lo)
            elif kind == "interval":
                gap_or_coverage = float(
                    np.mean((vals >= lo - interval_margin) & (vals <= hi + interval_margin))
                )
            else:
                gap_or_coverage = float(np.mean(vals <= hi))
        rows.append(
            SummaryRow(
                regime=regime,
                N=n_spacings,
                count=count,
                undefined_count=undefined,
                mean=mean,
                sd=sd,
                median=median,
                q05=q05,
                q95=q95,
                target_lo=lo,
                target_hi=hi,
                gap_or_coverage=gap_or_coverage,
            )
        )
    return rows


def _fmt(x: float | int | str | None) -> str:
    if x is None:
        return "NA"
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isnan(x):
        return "NA"
    return "%.17g" % x


def _open_dest(dest):
    # writers accept a path or an already-open text stream (e.g. stdout)
    if hasattr(dest, "write"):
        return nullcontext(dest)
    return open(dest, "w", newline="")


def write_records_csv(path: str | Path, records: Iterable[ReplicateRecord]) -> None:
    with _open_dest(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.regime,
                    r.N,
                    r.k,
                    r.n,
                    _fmt(r.a_N),
                    r.seed,
                    r.replicate,
                    _fmt(r.mu),
                    _fmt(r.lam),
                    _fmt(r.k_n),
                    _fmt(r.theta),
                    _fmt(r.d_scaled),
                    r.target_kind,
                    _fmt(r.target_lo),
                    _fmt(r.target_hi),
                ]
            )


def write_summary_csv(path: str | Path, rows: Iterable[SummaryRow]) -> None:
    with _open_dest(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in rows:
            w.writerow(
                [
                    r.regime,
                    r.N,
                    r.count,
                    r.undefined_count,
                    _fmt(r.mean),
                    _fmt(r.sd),
                    _fmt(r.median),
                    _fmt(r.q05),
                    _fmt(r.q95),
                    _fmt(r.target_lo),
                    _fmt(r.target_hi),
                    _fmt(r.gap_or_coverage),
                ]
            )


def write_conditions_csv(
    path: str | Path, reports: Iterable[regimes.ConditionReport]
) -> None:
    with _open_dest(path) as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CONDITION_COLUMNS)
        for rep in reports:
            for n_spacings, value in zip(rep.n_grid, rep.values):
                w.writerow(
                    [rep.condition, n_spacings, _fmt(value), rep.required, rep.verdict]
                )


def persist(result: ExperimentResult, out_dir: str | Path | None = None) -> list[Path]:
    """Write the emitted tables; returns the paths written."""
    target_dir = out_dir if out_dir is not None else result.config.out_dir
    if target_dir is None:
        raise ConfigError("no out_dir given (neither in config nor as argument)")
    d = Path(target_dir)
    d.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "records" in result.config.emit:
        p = d / "records.csv"
        write_records_csv(p, result.records)
        written.append(p)
    if "summary" in result.config.emit:
        p = d / "summary.csv"
        write_summary_csv(p, result.summary)
        written.append(p)
    if "conditions" in result.config.emit:
        p = d / "conditions.csv"
        write_conditions_csv(p, result.conditions)
        written.append(p)
    return written


def _parse_opt_float(s: str) -> float | None:
    return None if s == "NA" else float(s)


def load_records_csv(path: str | Path) -> list[ReplicateRecord]:
    out: list[ReplicateRecord] = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != RECORD_COLUMNS:
            raise ConfigError(
                f"{path} does not look like a records table "
                f"(columns {reader.fieldnames})"
            )
        for row in reader:
            out.append(
                ReplicateRecord(
                    regime=row["regime"],
                    N=int(row["N"]),
                    k=int(row["k"]),
                    n=int(row["n"]),
                    a_N=float(row["a_N"]),
                    seed=int(row["seed"]),
                    replicate=int(row["replicate"]),
                    mu=float(row["mu"]),
                    lam=float(row["lambda"]),
                    k_n=_parse_opt_float(row["k_n"]),
                    theta=float(row["theta"]),
                    d_scaled=_parse_opt_float(row["d_scaled"]),
                    target_kind=row["target_kind"],
                    target_lo=_parse_opt_float(row["target_lo"]),
                    target_hi=_parse_opt_float(row["target_hi"]),
                )
            )
    return out

"""Bandwidth regimes, growth conditions, and limit targets.

Four bandwidth variants cover the qualitatively different limit behaviors
of the normalized modulus:

  I    caller-supplied schedule (validated against the S-conditions),
  II   a_N = c log N / N          (Erdos-Renyi increments; finite limit h(c)),
  III  a_N = (log N)^-c           (slow bandwidths; interval bracket),
  IV   a_N = c_N log N / N, c_N -> 0   (sub-Erdos-Renyi; scaled upper bound).

Growing-order runs gate every bandwidth against the deep-tail threshold
t_k(delta).  Condition checks evaluate each growth expression on the run's
N-grid and classify the observed trend by the least-squares slope of
log(value) against log(log N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gammaint
from .errors import DomainError, NumericError, PreconditionError, RegimeViolation

__all__ = [
    "ConditionReport",
    "LimitTarget",
    "RegimeSpec",
    "bandwidth",
    "beta_residual",
    "check_conditions",
    "d_scaling",
    "erdos_renyi_beta",
    "h_function",
    "limit_normalizer",
    "limit_target",
    "order_of",
]

_VARIANTS = ("I", "II", "III", "IV")
_C_SCHEDULES = ("inv_loglog",)
_K_RULES = ("loglog",)
_TREND_SLOPE = 0.05


@dataclass(frozen=True)
class RegimeSpec:
    """One bandwidth/order regime for a Monte Carlo campaign."""

    variant: str
    c: float | None = None
    c_schedule: str | None = None  # variant IV; default inv_loglog
    a_rule: str | None = None  # variant I; 'pow:<p>' means a_N = N**p
    k_mode: str = "fixed"
    k: int | None = None
    k_rule: str | None = None  # growing mode; default loglog
    delta: float | None = None  # deep-tail gate for growing order

    def __post_init__(self) -> None:
        if self.variant not in _VARIANTS:
            raise DomainError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if self.variant in ("II", "III"):
            if self.c is None or not self.c > 0.0:
                raise DomainError(f"variant {self.variant} requires c > 0")
        if self.variant == "I":
            if self.a_rule is None:
                raise DomainError("variant I requires an a_rule schedule")
            _parse_power_rule(self.a_rule)
        if self.variant == "IV":
            sched = self.c_schedule or "inv_loglog"
            if sched not in _C_SCHEDULES:
                raise DomainError(f"unknown c_schedule {sched!r}")
        if self.k_mode == "fixed":
            if self.k is None or int(self.k) < 1:
                raise DomainError("fixed order mode requires k >= 1")
        elif self.k_mode == "growing":
            rule = self.k_rule or "loglog"
            if rule not in _K_RULES:
                raise DomainError(f"unknown k_rule {rule!r}")
            if self.delta is None or not self.delta > 2.0:
                raise DomainError("growing order mode requires delta > 2")
        else:
            raise DomainError(f"k_mode must be 'fixed' or 'growing', got {self.k_mode!r}")


def _parse_power_rule(rule: str) -> float:
    if not isinstance(rule, str) or not rule.startswith("pow:"):
        raise DomainError(f"a_rule must look like 'pow:<exponent>', got {rule!r}")
    try:
        p = float(rule.split(":", 1)[1])
    except ValueError as exc:
        raise DomainError(f"bad a_rule exponent in {rule!r}") from exc
    if not -1.0 <= p < 0.0:
        raise DomainError(f"a_rule exponent must be in [-1, 0), got {p}")
    return p


def order_of(spec: RegimeSpec, n_spacings: int) -> int:
    """k at sample size N under the spec's order mode."""
    if n_spacings < 2:
        raise DomainError(f"N must be >= 2, got {n_spacings}")
    if spec.k_mode == "fixed":
        return int(spec.k)
    # default growing rule: slowly increasing with N
    return max(2, int(math.floor(math.log(math.log(n_spacings)))) + 1)


def _c_n(spec: RegimeSpec, n_spacings: int) -> float:
    return 1.0 / math.log(math.log(n_spacings))


def bandwidth(spec: RegimeSpec, n_spacings: int) -> float:
    """a_N under the spec's variant; gates growing order against t_k(delta)."""
    n_spacings = int(n_spacings)
    if n_spacings < 16:
        raise PreconditionError(f"bandwidth schedules need N >= 16, got {n_spacings}")
    ln = math.log(n_spacings)
    if spec.variant == "I":
        a = float(n_spacings) ** _parse_power_rule(spec.a_rule)
    elif spec.variant == "II":
        a = spec.c * ln / n_spacings
    elif spec.variant == "III":
        a = ln ** (-spec.c)
    else:
        a = _c_n(spec, n_spacings) * ln / n_spacings
    if not 0.0 < a < 1.0:
        raise RegimeViolation(f"schedule left (0, 1): a_N = {a} at N = {n_spacings}")
    if spec.k_mode == "growing":
        k = order_of(spec, n_spacings)
        gate = gammaint.tail_threshold(k, spec.delta)
        if math.log(a) > gate.log_value + 1e-12:
            raise RegimeViolation(
                f"a_N = {a:.6g} exceeds deep-tail threshold exp({gate.log_value:.6g}) "
                f"at N = {n_spacings}, k = {k}, delta = {spec.delta}"
            )
    return a


def beta_residual(beta: float, c: float) -> float:
    """Residual of the Erdos-Renyi root equation beta (log beta - 1) = 1/c - 1."""
    return beta * (math.log(beta) - 1.0) - (1.0 / c - 1.0)


def erdos_renyi_beta(c: float) -> float:
    """The root beta > 1 of beta (log beta - 1) = 1/c - 1.

    The left side is strictly increasing from -1 at beta = 1, so the root
    exists and is unique for every c > 0.  Bisection bracket plus Newton
    polish; residual at the returned point is at most 1e-12.
    """
    c = float(c)
    if not c > 0.0 or not math.isfinite(c):
        raise DomainError(f"c must be finite and > 0, got {c}")
    target = 1.0 / c - 1.0
    lo = 1.0
    hi = 2.0
    while beta_residual(hi, c) < 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise NumericError(f"beta bracket expansion failed for c = {c}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if beta_residual(mid, c) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    beta = 0.5 * (lo + hi)
    for _ in range(8):  # Newton polish; derivative is log(beta)
        r = beta_residual(beta, c)
        if abs(r) <= 1e-13:
            break
        d = math.log(beta)
        if d <= 0.0:
            break
        step = r / d
        nxt = beta - step
        if nxt <= 1.0:
            nxt = 0.5 * (beta + 1.0)
        beta = nxt
    if abs(beta_residual(beta, c)) > 1e-12 * max(1.0, abs(target)):
        raise NumericError(f"beta solver residual too large for c = {c}")
    return beta


def h_function(s: float) -> float:
    """h(s) = sqrt(s/2) (beta(s) - 1), the Erdos-Renyi limit at rate c = s."""
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"h requires s > 0, got {s}")
    return math.sqrt(s / 2.0) * (erdos_renyi_beta(s) - 1.0)


def d_scaling(n_spacings: int, c_n: float) -> float:
    """d_N = sqrt(N) log(1/c_N) / log N, the variant-IV modulus scale."""
    if n_spacings < 2:
        raise DomainError(f"N must be >= 2, got {n_spacings}")
    c_n = float(c_n)
    if not 0.0 < c_n < 1.0:
        raise DomainError(f"c_N must be in (0, 1), got {c_n}")
    return math.sqrt(n_spacings) * math.log(1.0 / c_n) / math.log(n_spacings)


def limit_normalizer(spec: RegimeSpec, n_spacings: int, a: float) -> float | None:
    """Oscillation scale b whose ratio Lambda/b has the regime's stated limit.

    The general envelope for the modulus is sqrt(2a (log(1/a) + log log N)).
    Variants I, II and IV shrink a fast enough that log(1/a) dominates, so
    their limits are stated against sqrt(2a log(1/a)); variant III keeps
    log(1/a) comparable to log log N and its bracket [sqrt(c), sqrt(1+c)]
    is stated against the iterated-logarithm scale sqrt(2a log log N).

    Returns None when a >= 1/e: such rows are reported as
    normalizer-undefined rather than averaged into trend statistics.
    """
    a = float(a)
    if not 0.0 < a < 1.0:
        raise DomainError(f"bandwidth must be in (0, 1), got {a}")
    if a >= 1.0 / math.e:
        return None
    if spec.variant == "III":
        return math.sqrt(2.0 * a * math.log(math.log(n_spacings)))
    return math.sqrt(2.0 * a * math.log(1.0 / a))


@dataclass(frozen=True)
class LimitTarget:
    """What the normalized statistic should approach under a regime."""

    kind: str  # 'point' | 'interval' | 'upper-bound'
    lo: float | None
    hi: float | None
    scaling: str  # 'k_n' (LIL-normalized) or 'd_n' (variant IV)


def limit_target(spec: RegimeSpec) -> LimitTarget:
    if spec.variant == "I":
        return LimitTarget(kind="point", lo=1.0, hi=1.0, scaling="k_n")
    if spec.variant == "II":
        v = h_function(spec.c)
        return LimitTarget(kind="point", lo=v, hi=v, scaling="k_n")
    if spec.variant == "III":
        return LimitTarget(
            kind="interval",
            lo=math.sqrt(spec.c),
            hi=math.sqrt(1.0 + spec.c),
            scaling="k_n",
        )
    return LimitTarget(kind="upper-bound", lo=None, hi=2.0, scaling="d_n")


@dataclass(frozen=True)
class ConditionReport:
    """One growth condition evaluated along the N-grid."""

    condition: str
    n_grid: tuple[int, ...]
    values: tuple[float, ...]
    required: str  # 'to_zero' | 'to_infinity'
    verdict: str  # 'consistent-trend' | 'inconsistent' | 'inconclusive' | 'not-applicable'


def _trend_verdict(values: Sequence[float], n_grid: Sequence[int], required: str) -> str:
    vals = np.asarray(values, dtype=np.float64)
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0.0) or len(vals) < 2:
        return "inconclusive"
    x = np.log(np.log(np.asarray(n_grid, dtype=np.float64)))
    y = np.log(vals)
    slope = float(np.polyfit(x, y, 1)[0])
    if required == "to_zero":
        if slope < -_TREND_SLOPE:
            return "consistent-trend"
        if slope > _TREND_SLOPE:
            return "inconsistent"
        return "inconclusive"
    if slope > _TREND_SLOPE:
        return "consistent-trend"
    if slope < -_TREND_SLOPE:
        return "inconsistent"
    return "inconclusive"


def check_conditions(spec: RegimeSpec, n_grid: Sequence[int]) -> list[ConditionReport]:
    """Evaluate every growth condition on the grid and classify its trend.

    Conditions that do not apply to the spec (variant-IV-only expressions
    under other variants, order growth under fixed order) are reported with
    verdict 'not-applicable' rather than dropped.
    """
    grid = [int(n) for n in n_grid]
    if len(grid) < 2:
        raise PreconditionError("condition checks need at least two grid points")
    if any(n < 16 for n in grid):
        raise PreconditionError("condition checks need N >= 16")
    if any(grid[i] >= grid[i + 1] for i in range(len(grid) - 1)):
        raise PreconditionError("N-grid must be strictly increasing")

    a = np.array([bandwidth(spec, n) for n in grid])
    k = np.array([order_of(spec, n) for n in grid], dtype=np.float64)
    nn = np.asarray(grid, dtype=np.float64)
    n_under = nn * k - 1.0  # underlying uniform sample size
    log_inv_a = -np.log(a)
    loglog_n = np.log(np.log(n_under))

    def b_of(av: np.ndarray) -> np.ndarray:
        # NaN (not an exception) for a >= 1/e: the trend verdict reports
        # such grids as inconclusive instead of refusing to evaluate.
        with np.errstate(invalid="ignore"):
            return np.sqrt(2.0 * av * np.log(np.log(1.0 / av)))

    rows: list[ConditionReport] = []

    def add(name: str, values: np.ndarray, required: str, applicable: bool = True) -> None:
        vals = tuple(float(v) for v in values)
        verdict = (
            _trend_verdict(vals, grid, required) if applicable else "not-applicable"
        )
        rows.append(
            ConditionReport(
                condition=name,
                n_grid=tuple(grid),
                values=vals,
                required=required,
                verdict=verdict,
            )
        )

    add("S1", nn * a, "to_infinity")
    add("S2", log_inv_a / (nn * a), "to_zero")
    add("S3", log_inv_a / np.log(np.log(nn)), "to_infinity")
    add("Q1", np.sqrt(loglog_n / n_under) * log_inv_a, "to_zero")
    add("Q3", loglog_n**2 / (nn * a * log_inv_a), "to_zero")
    add("Q4", np.sqrt(2.0 * loglog_n / k) * b_of(a), "to_zero")
    add("Q4_unscaled", np.sqrt(2.0 * loglog_n) * b_of(a), "to_zero")
    add("K", k * loglog_n / nn, "to_zero")

    if spec.k_mode == "growing":
        add("Q2", k, "to_infinity")
    else:
        # fixed order can never satisfy Q2: report it as such, no trend fit
        rows.append(
            ConditionReport(
                condition="Q2",
                n_grid=tuple(grid),
                values=tuple(float(v) for v in k),
                required="to_infinity",
                verdict="inconsistent",
            )
        )

    is_iv = spec.variant == "IV"
    if is_iv:
        c_n = np.array([_c_n(spec, n) for n in grid])
        add("W1", c_n, "to_zero")
        add("W2", c_n * np.log(nn), "to_infinity")
        add("W3", np.log(1.0 / c_n) * np.log(np.log(nn)) / np.log(nn), "to_zero")
        add(
            "Q5",
            a * log_inv_a * np.sqrt(loglog_n) * np.sqrt(nn) * np.log(1.0 / c_n)
            / (np.sqrt(k) * np.log(nn)),
            "to_zero",
        )
    else:
        for name, req in (("W1", "to_zero"), ("W2", "to_infinity"), ("W3", "to_zero"), ("Q5", "to_zero")):
            add(name, np.full(len(grid), math.nan), req, applicable=False)

    return rows

"""Distributional transform maps and their increment suprema.

Two maps on [0, 1] drive the small-bandwidth analysis of the reduced
spacings process at order k:

  psi(s) = cdf_k(mu * quantile_k(s))   (normalizer-perturbation map)
  phi(s) = pdf_k(quantile_k(s)) * quantile_k(s)   (local-scale map)

Both increment processes  psi(s+h) - psi(s)  and  phi(s+h) - phi(s)  are
monotone in s, so their absolute suprema over s reduce to the two endpoint
values at s = 0 and s = 1-h.  Suprema over 0 < h <= a are taken on a
256-point log grid joined with h = a; endpoint values are evaluated in
log space, so bandwidths far below double underflow still produce exact
ratios against their theoretical scales.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gammaint, sampling
from .errors import DomainError, PreconditionError, RegimeViolation

__all__ = [
    "FixedMu",
    "IncrementReport",
    "PhiMap",
    "PsiMap",
    "SimulatedMu",
    "lemma_diagnostics",
    "phi_increment_sup",
    "psi_increment_sup",
]

_GRID_POINTS = 256
_GRID_DECADES = 18.420680743952367  # log grid spans a factor exp(-...) ~ 1e-8 below a


@dataclass(frozen=True)
class PsiMap:
    """psi(s) = cdf_k(mu * quantile_k(s)); identity when mu = 1."""

    k: int
    mu: float

    def __post_init__(self) -> None:
        gammaint._check_order(self.k)
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise DomainError(f"mu must be finite and > 0, got {self.mu}")

    def __call__(self, s: float) -> float:
        s = _check_unit(s)
        if s == 0.0:
            return 0.0
        if s == 1.0:
            return 1.0
        return gammaint.cdf(self.k, self.mu * gammaint.quantile(self.k, s))

    def log_left_increment(self, log_h: float) -> float:
        """log of psi(h) = log increment over (0, h], from log h."""
        x = gammaint.quantile_from_log_cdf(self.k, log_h)
        return gammaint.log_cdf(self.k, self.mu * x)

    def log_right_increment(self, log_h: float) -> float:
        """log of 1 - psi(1-h) = log increment over (1-h, 1], from log h."""
        x = gammaint.quantile_from_log_survival(self.k, log_h)
        return gammaint.log_survival(self.k, self.mu * x)


@dataclass(frozen=True)
class PhiMap:
    """phi(s) = pdf_k(x) * x at x = quantile_k(s); vanishes at both ends."""

    k: int

    def __post_init__(self) -> None:
        gammaint._check_order(self.k)

    def __call__(self, s: float) -> float:
        s = _check_unit(s)
        if s == 0.0 or s == 1.0:
            return 0.0
        x = gammaint.quantile(self.k, s)
        return math.exp(gammaint.log_pdf(self.k, x) + math.log(x))

    def log_value_at_log_cdf(self, log_h: float) -> float:
        x = gammaint.quantile_from_log_cdf(self.k, log_h)
        return gammaint.log_pdf(self.k, x) + math.log(x)

    def log_value_at_log_survival(self, log_h: float) -> float:
        x = gammaint.quantile_from_log_survival(self.k, log_h)
        return gammaint.log_pdf(self.k, x) + math.log(x)


def _check_unit(s: float) -> float:
    s = float(s)
    if not 0.0 <= s <= 1.0 or not math.isfinite(s):
        raise DomainError(f"argument must be in [0, 1], got {s}")
    return s


@dataclass(frozen=True)
class IncrementReport:
    """Supremum of an increment family over 0 < h <= a, with scale ratios."""

    a: float
    log_a: float
    sup_value: float  # exp(log_sup); 0.0 when below double underflow
    log_sup: float
    ratio: float  # sup / theoretical scale
    argmax_h: float
    argmax_log_h: float
    argmax_end: str  # 'left' (s = 0) or 'right' (s = 1-h)
    alt_scale_log: float | None = None
    alt_ratio: float | None = None


def _log_h_grid(log_a: float) -> np.ndarray:
    grid = log_a + np.linspace(-_GRID_DECADES, 0.0, _GRID_POINTS)
    return grid


def _check_log_a(a: float | None, log_a: float | None) -> float:
    if log_a is None:
        if a is None:
            raise DomainError("provide a or log_a")
        a = float(a)
        if not 0.0 < a < 1.0:
            raise DomainError(f"bandwidth must be in (0, 1), got {a}")
        return math.log(a)
    log_a = float(log_a)
    if not log_a < 0.0:
        raise DomainError(f"log bandwidth must be < 0, got {log_a}")
    return log_a


def psi_increment_sup(
    m: PsiMap, a: float | None = None, *, log_a: float | None = None
) -> IncrementReport:
    """sup over h <= a and s of |psi(s+h) - psi(s)|, with ratio sup/a.

    The secondary ratio rescales by a^mu (log 1/a)^((k-1)(1-mu)), the
    skew-adjusted small-bandwidth scale; it is reported, not asserted.
    """
    la = _check_log_a(a, log_a)
    best = (-math.inf, la, "right")
    for lh in _log_h_grid(la):
        lh = float(lh)
        left = m.log_left_increment(lh)
        right = m.log_right_increment(lh)
        if left > best[0]:
            best = (left, lh, "left")
        if right > best[0]:
            best = (right, lh, "right")
    log_sup, arg_lh, end = best
    alt_log = None
    alt_ratio = None
    if la < -1.0:
        alt_log = m.mu * la + (m.k - 1) * (1.0 - m.mu) * math.log(-la)
        alt_ratio = math.exp(log_sup - alt_log)
    return IncrementReport(
        a=math.exp(la),
        log_a=la,
        sup_value=math.exp(log_sup) if log_sup > -745.0 else 0.0,
        log_sup=log_sup,
        ratio=math.exp(log_sup - la),
        argmax_h=math.exp(arg_lh),
        argmax_log_h=arg_lh,
        argmax_end=end,
        alt_scale_log=alt_log,
        alt_ratio=alt_ratio,
    )


def phi_increment_sup(
    m: PhiMap, a: float | None = None, *, log_a: float | None = None
) -> IncrementReport:
    """sup over h <= a and s of |phi(s+h) - phi(s)|, with ratio sup/(a log 1/a).

    Requires a < 1/e so the scale is positive.  The secondary ratio is
    against the competing scale max(k a, a log 1/a).
    """
    la = _check_log_a(a, log_a)
    if la >= -1.0:
        raise DomainError(f"phi increment scale needs a < 1/e, got log a = {la}")
    best = (-math.inf, la, "right")
    for lh in _log_h_grid(la):
        lh = float(lh)
        left = m.log_value_at_log_cdf(lh)
        right = m.log_value_at_log_survival(lh)
        if left > best[0]:
            best = (left, lh, "left")
        if right > best[0]:
            best = (right, lh, "right")
    log_sup, arg_lh, end = best
    scale_log = la + math.log(-la)
    alt_log = la + math.log(max(m.k, -la))
    return IncrementReport(
        a=math.exp(la),
        log_a=la,
        sup_value=math.exp(log_sup) if log_sup > -745.0 else 0.0,
        log_sup=log_sup,
        ratio=math.exp(log_sup - scale_log),
        argmax_h=math.exp(arg_lh),
        argmax_log_h=arg_lh,
        argmax_end=end,
        alt_scale_log=alt_log,
        alt_ratio=math.exp(log_sup - alt_log),
    )


@dataclass(frozen=True)
class FixedMu:
    value: float

    def resolve(self, k: int) -> float:
        return float(self.value)


@dataclass(frozen=True)
class SimulatedMu:
    """Normalizer drawn from an actual spacings sample at the given size."""

    seed: int
    N: int

    def resolve(self, k: int) -> float:
        return sampling.sample_spacings(k, self.N, self.seed).mu


_LEMMAS = ("A1", "A2", "A3", "A4", "P1")


def lemma_diagnostics(
    lemma: str,
    k_schedule: Iterable[int],
    a_grid: Sequence[float],
    mu_source: FixedMu | SimulatedMu | None = None,
    delta: float | None = None,
) -> list[tuple[int, float, IncrementReport]]:
    """Increment-supremum diagnostics for one lemma over (k, a) pairs.

    A1/A3 report psi ratios (A3 in the deep-tail regime a <= t_k(delta)),
    A2/A4 the phi analogues, P1 the tail-quantile approximation with ratio
    measured_error / (log k * k^(1-delta)).  The a-grid must be strictly
    decreasing; deep-tail lemmas check each a against the threshold.
    """
    lemma = lemma.upper()
    if lemma not in _LEMMAS:
        raise DomainError(f"unknown lemma {lemma!r}, expected one of {_LEMMAS}")
    a_grid = [float(a) for a in a_grid]
    if any(not 0.0 < a < 1.0 for a in a_grid):
        raise DomainError("a-grid values must be in (0, 1)")
    if any(a_grid[i] <= a_grid[i + 1] for i in range(len(a_grid) - 1)):
        raise PreconditionError("a-grid must be strictly decreasing")
    deep = lemma in ("A3", "A4", "P1")
    if deep and delta is None:
        raise PreconditionError(f"lemma {lemma} requires delta")
    if lemma in ("A1", "A3") and mu_source is None:
        raise PreconditionError(f"lemma {lemma} requires a mu source")

    rows: list[tuple[int, float, IncrementReport]] = []
    for k in k_schedule:
        k = int(k)
        if deep:
            gate = gammaint.tail_threshold(k, delta)
            for a in a_grid:
                if math.log(a) > gate.log_value + 1e-12:
                    raise RegimeViolation(
                        f"a={a:.6g} exceeds tail threshold "
                        f"exp({gate.log_value:.6g}) for k={k}, delta={delta}"
                    )
        if lemma in ("A1", "A3"):
            mu = mu_source.resolve(k)
            m = PsiMap(k, mu)
            for a in a_grid:
                rows.append((k, a, psi_increment_sup(m, a)))
        elif lemma in ("A2", "A4"):
            m = PhiMap(k)
            for a in a_grid:
                rows.append((k, a, phi_increment_sup(m, a)))
        else:  # P1: grid entries are upper-tail masses
            for s in a_grid:
                approx, err = gammaint.quantile_tail_approx(k, s, delta)
                scale = math.log(k) * k ** (1.0 - delta) if k > 1 else 1.0
                rows.append(
                    (
                        k,
                        s,
                        IncrementReport(
                            a=s,
                            log_a=math.log(s),
                            sup_value=err,
                            log_sup=math.log(err) if err > 0 else -math.inf,
                            ratio=err / scale,
                            argmax_h=approx,
                            argmax_log_h=math.log(approx),
                            argmax_end="tail",
                        ),
                    )
                )
    return rows

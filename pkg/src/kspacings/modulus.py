"""Oscillation modulus of a uniform-type empirical path.

For a sorted path V of N points in [0, 1] and the centered step process
R(s) = sqrt(N) (G(s) - s), the modulus at bandwidth a is

    Lambda(a) = sup_{0<=h<=a} sup_{0<=s<=1-h} |R(s+h) - R(s)|

with half-open increment windows (s, s+h].  The supremum over window
placements is reached in limiting configurations whose endpoints touch
sample points, which reduces it to four exhaustive O(N) candidate scans:

  positive part  max over captures i..j with span <= a of (j-i+1)/N - span,
  negative part  max over sentinel-extended gaps (span - interior/N, span <= a)
                 and width-a windows (a - min window count / N),

each clamped below at zero.  The scans live in a compiled extension with a
pure-Python twin; both enumerate identical candidates.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceLimitError

if os.environ.get("KSPACINGS_PURE"):
    from . import _modcore_py as _impl

    _BACKEND = "pure"
else:
    try:
        from . import _modcore as _impl  # type: ignore[attr-defined]

        _BACKEND = "compiled"
    except ImportError:
        from . import _modcore_py as _impl

        _BACKEND = "pure"

__all__ = [
    "EmpiricalPath",
    "ModulusReport",
    "backend_name",
    "brute_force_modulus",
    "grid_witness",
    "lil_normalizer",
    "normalized_modulus",
    "one_sided_increment",
    "oscillation_modulus",
]

_BRUTE_FORCE_CAP = 200


def backend_name() -> str:
    """Which scan implementation is active: 'compiled' or 'pure'."""
    return _BACKEND


@dataclass(frozen=True, eq=False)
class EmpiricalPath:
    """Sorted sample on [0, 1] whose step function the modulus is taken of."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size == 0:
            raise DomainError("path must be a non-empty 1-d array")
        if not np.all(np.isfinite(pts)):
            raise DomainError("path values must be finite")
        if pts[0] < 0.0 or pts[-1] > 1.0:
            raise DomainError("path values must lie in [0, 1]")
        if np.any(np.diff(pts) < 0.0):
            raise DomainError("path values must be sorted ascending")
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class ModulusReport:
    """Exact modulus at one bandwidth, with the achieving windows."""

    a: float
    lam: float
    k_n: float | None  # None when a >= 1/e leaves the normalizer undefined
    b_n: float | None
    theta: float
    pos_window: tuple[int, int]  # 1-based capture endpoints
    neg_window: tuple


def _check_a(a: float) -> float:
    a = float(a)
    if not 0.0 < a < 1.0 or not math.isfinite(a):
        raise DomainError(f"bandwidth must be in (0, 1), got {a}")
    return a


def lil_normalizer(a: float) -> float | None:
    """b(a) = sqrt(2 a log log (1/a)); None when a >= 1/e makes it undefined."""
    a = _check_a(a)
    if a >= 1.0 / math.e:
        return None
    return math.sqrt(2.0 * a * math.log(math.log(1.0 / a)))


def oscillation_modulus(path: EmpiricalPath, a: float) -> ModulusReport:
    v = path.points
    n = path.N
    a = _check_a(a)
    pos_raw, pi, pj = _impl.pos_scan(v, a)
    gap_raw, gi, gj = _impl.gap_scan(v, a)
    min_count = _impl.min_count_width(v, a)
    width_val = a - min_count / n

    pos = max(pos_raw, 0.0)
    neg = max(gap_raw, width_val, 0.0)
    lam = math.sqrt(n) * max(pos, neg)

    if neg == 0.0:
        neg_window: tuple = ("none",)
    elif gap_raw >= width_val:
        neg_window = ("gap", int(gi), int(gj))
    else:
        neg_window = ("width", int(min_count))

    b_n = lil_normalizer(a)
    k_n = lam / b_n if b_n is not None else None
    theta = one_sided_increment(path, a)
    return ModulusReport(
        a=a,
        lam=lam,
        k_n=k_n,
        b_n=b_n,
        theta=theta,
        pos_window=(int(pi) + 1, int(pj) + 1),
        neg_window=neg_window,
    )


def normalized_modulus(path: EmpiricalPath, a: float) -> float | None:
    """Lambda(a) / b(a), or None when the normalizer is undefined (a >= 1/e)."""
    return oscillation_modulus(path, a).k_n


def one_sided_increment(path: EmpiricalPath, a: float) -> float:
    """theta(a) = sup_s (R(s+a) - R(s)) = sqrt(N) (C_max/N - a)."""
    a = _check_a(a)
    c_max = _impl.max_count_width(path.points, a)
    n = path.N
    return math.sqrt(n) * (c_max / n - a)


def _pos_brute(v: np.ndarray, a: float) -> float:
    n = v.size
    idx = np.arange(1, n + 1, dtype=np.float64)
    span = v[None, :] - v[:, None]  # span[i, j] = v_j - v_i
    count = (idx[None, :] - idx[:, None] + 1.0) / n
    vals = count - span
    ok = (span <= a) & (span >= 0.0) & (idx[None, :] >= idx[:, None])
    return float(vals[ok].max()) if ok.any() else 0.0


def _gap_brute(v: np.ndarray, a: float) -> float:
    n = v.size
    vx = np.concatenate(([0.0], v, [1.0]))
    m = np.arange(n + 2, dtype=np.float64)
    b = vx - m / n
    span = vx[None, :] - vx[:, None]
    vals = b[None, :] - b[:, None] + 1.0 / n
    ok = (span <= a) & (m[None, :] > m[:, None])
    return float(vals[ok].max()) if ok.any() else -math.inf


def brute_force_modulus(path: EmpiricalPath, a: float) -> float:
    """Exhaustive O(N^2) modulus for cross-checking the scan kernels.

    Enumerates every candidate family directly and verifies the dense-grid
    lower-bound witness on the way out.  Capped at N = 200.
    """
    a = _check_a(a)
    v = path.points
    n = path.N
    if n > _BRUTE_FORCE_CAP:
        raise ResourceLimitError(f"brute force capped at N={_BRUTE_FORCE_CAP}, got {n}")
    pos = max(_pos_brute(v, a), 0.0)
    min_count = _modcore_py_min_count(v, a)
    neg = max(_gap_brute(v, a), a - min_count / n, 0.0)
    lam = math.sqrt(n) * max(pos, neg)
    witness = grid_witness(path, a)
    if witness > lam + 1e-12:
        raise AssertionError(
            f"grid witness {witness} exceeds enumerated modulus {lam}"
        )
    return lam


def _modcore_py_min_count(v: np.ndarray, a: float) -> int:
    from . import _modcore_py

    return int(_modcore_py.min_count_width(v, a))


def grid_witness(path: EmpiricalPath, a: float) -> float:
    """Lower bound for the modulus from |R(s') - R(s)| on a dense s-grid.

    Grid resolution is min(a, 1/(10N)); by definition witness <= Lambda(a).
    """
    a = _check_a(a)
    v = path.points
    n = path.N
    step = min(a, 1.0 / (10.0 * n))
    grid = np.arange(0.0, 1.0 + step / 2.0, step)
    grid = grid[grid <= 1.0]
    counts = np.searchsorted(v, grid, side="right")
    r = math.sqrt(n) * (counts / n - grid)
    w = int(math.floor(a / step + 1e-9))
    best = 0.0
    for d in range(1, min(w, grid.size - 1) + 1):
        if grid[d] - grid[0] > a + 1e-15:
            break
        diff = np.abs(r[d:] - r[:-d])
        m = float(diff.max())
        if m > best:
            best = m
    return best

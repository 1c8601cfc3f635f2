"""Pure-Python twin of the compiled modulus scan kernels.

Used when the _modcore extension is unavailable (or forced via the
KSPACINGS_PURE environment variable).  The monotone-deque scans stay plain
loops over Python lists; the window-count scans vectorize with searchsorted.
Candidate enumeration and arithmetic must match _modcore exactly.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gap_scan", "max_count_width", "min_count_width", "pos_scan"]


def pos_scan(v, a):
    n = len(v)
    inv = 1.0 / n
    vl = [float(x) for x in v]
    av = [0.0] * n
    q = [0] * n
    head = tail = 0
    best = -1e300
    bi = bj = 0
    for j in range(n):
        aj = (j + 1) * inv - vl[j]
        av[j] = aj
        while tail > head and av[q[tail - 1]] >= aj:
            tail -= 1
        q[tail] = j
        tail += 1
        vj = vl[j]
        while vj - vl[q[head]] > a:
            head += 1
        cand = aj - av[q[head]] + inv
        if cand > best:
            best = cand
            bi = q[head]
            bj = j
    return best, bi, bj


def gap_scan(v, a):
    n = len(v)
    inv = 1.0 / n
    vx = [0.0] + [float(x) for x in v] + [1.0]
    b = [vx[m] - m * inv for m in range(n + 2)]
    q = [0] * (n + 2)
    head = tail = 0
    best = -1e300
    bi = bj = 0
    for j in range(1, n + 2):
        i = j - 1
        bij = b[i]
        while tail > head and b[q[tail - 1]] >= bij:
            tail -= 1
        q[tail] = i
        tail += 1
        vj = vx[j]
        while tail > head and vj - vx[q[head]] > a:
            head += 1
        if tail > head:
            cand = b[j] - b[q[head]] + inv
            if cand > best:
                best = cand
                bi = q[head]
                bj = j
    return best, bi, bj


def min_count_width(v, a):
    arr = np.asarray(v, dtype=np.float64)
    n = arr.size
    zero = int(np.searchsorted(arr, 0.0, side="right"))
    right0 = int(np.searchsorted(arr, a, side="right"))
    best = right0 - zero  # s = 0
    mask = arr <= 1.0 - a
    if mask.any():
        anchors = arr[mask]
        ub = np.searchsorted(arr, anchors, side="right")
        rb = np.searchsorted(arr, anchors + a, side="right")
        best = min(best, int((rb - ub).min()))
    return best


def max_count_width(v, a):
    arr = np.asarray(v, dtype=np.float64)
    n = arr.size
    le = int(np.searchsorted(arr, 1.0 - a, side="right"))
    best = n - le  # s = 1 - a
    mask = arr <= 1.0 - a
    if mask.any():
        anchors = arr[mask]
        lt = np.searchsorted(arr, anchors, side="left")
        rt = np.searchsorted(arr, anchors + a, side="left")
        best = max(best, int((rt - lt).max()))
    return best

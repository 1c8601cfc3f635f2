# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels for the oscillation modulus.

Each function consumes a sorted path (ascending doubles in [0, 1]) and a
bandwidth a in (0, 1).  See _modcore_py for the reference twin; both must
stay numerically identical, candidate for candidate.
"""

import numpy as np


def pos_scan(double[::1] v, double a):
    """Best positive-part candidate (count/N - span) over captures with span <= a.

    Returns (value, i, j) with 0-based capture endpoints; value is unclamped.
    """
    cdef Py_ssize_t n = v.shape[0]
    cdef double inv = 1.0 / n
    cdef double[::1] av = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t[::1] q = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t head = 0, tail = 0, j, bi = 0, bj = 0
    cdef double best = -1e300, cand, aj
    for j in range(n):
        aj = (j + 1) * inv - v[j]
        av[j] = aj
        while tail > head and av[q[tail - 1]] >= aj:
            tail -= 1
        q[tail] = j
        tail += 1
        while v[j] - v[q[head]] > a:
            head += 1
        cand = aj - av[q[head]] + inv
        if cand > best:
            best = cand
            bi = q[head]
            bj = j
    return best, bi, bj


def gap_scan(double[::1] v, double a):
    """Best uncovered-width candidate (span - interior/N) over sentinel-extended
    point pairs with span <= a.

    Indices are in the extended numbering: 0 is the left edge at 0.0 and
    n+1 the right edge at 1.0.  Value is unclamped (-inf when no pair fits).
    """
    cdef Py_ssize_t n = v.shape[0]
    cdef double inv = 1.0 / n
    cdef double[::1] vx = np.empty(n + 2, dtype=np.float64)
    cdef double[::1] b = np.empty(n + 2, dtype=np.float64)
    cdef Py_ssize_t[::1] q = np.empty(n + 2, dtype=np.intp)
    cdef Py_ssize_t head = 0, tail = 0, j, i, bi = 0, bj = 0
    cdef double best = -1e300, cand
    vx[0] = 0.0
    for j in range(n):
        vx[j + 1] = v[j]
    vx[n + 1] = 1.0
    for j in range(n + 2):
        b[j] = vx[j] - j * inv
    for j in range(1, n + 2):
        i = j - 1
        while tail > head and b[q[tail - 1]] >= b[i]:
            tail -= 1
        q[tail] = i
        tail += 1
        while tail > head and vx[j] - vx[q[head]] > a:
            head += 1
        if tail > head:
            cand = b[j] - b[q[head]] + inv
            if cand > best:
                best = cand
                bi = q[head]
                bj = j
    return best, bi, bj


def min_count_width(double[::1] v, double a):
    """Minimum point count over half-open width-a windows (s, s+a], s in [0, 1-a]."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, u = 0, r = 0, z = 0, best, cnt
    cdef double s
    while z < n and v[z] <= 0.0:
        z += 1
    while r < n and v[r] <= a:
        r += 1
    best = r - z  # s = 0
    for i in range(n):
        s = v[i]
        if s > 1.0 - a:
            break
        while u < n and v[u] <= s:
            u += 1
        while r < n and v[r] <= s + a:
            r += 1
        cnt = r - u
        if cnt < best:
            best = cnt
    return best


def max_count_width(double[::1] v, double a):
    """Maximum point count over half-open width-a windows (s, s+a], s in [0, 1-a]."""
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t i, f = 0, r = 0, r2 = n, best, cnt
    cdef double s
    while r2 > 0 and v[r2 - 1] > 1.0 - a:
        r2 -= 1
    best = n - r2  # s = 1 - a
    for i in range(n):
        s = v[i]
        if s > 1.0 - a:
            break
        while f < n and v[f] < s:
            f += 1
        while r < n and v[r] < s + a:
            r += 1
        cnt = r - f
        if cnt > best:
            best = cnt
    return best

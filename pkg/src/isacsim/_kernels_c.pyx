# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels (see _kernels_py for the
reference semantics).  Kept in lockstep with the fallback: same bisection
schedule, same summation order, same tie-breaking."""

import numpy as np

from libc.math cimport exp, sqrt


def radial_inverse_cdf(u, double beta, double hole_radius, double max_radius,
                       double rel_tol=1e-9):
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = uv.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double lo, hi, mid, g_lo, g_hi, target, tol, span

    if beta == 0.0:
        span = max_radius * max_radius - hole_radius * hole_radius
        for i in range(n):
            out[i] = sqrt(hole_radius * hole_radius + uv[i] * span)
        return out_arr

    g_lo = exp(-beta * hole_radius) * (1.0 + beta * hole_radius)
    g_hi = exp(-beta * max_radius) * (1.0 + beta * max_radius)
    tol = rel_tol * max_radius
    for i in range(n):
        target = g_lo - uv[i] * (g_lo - g_hi)
        lo = hole_radius
        hi = max_radius
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if exp(-beta * mid) * (1.0 + beta * mid) <= target:
                hi = mid
            else:
                lo = mid
        out[i] = 0.5 * (lo + hi)
    return out_arr


def associate(mean_power, spectral_eff, dist3d, double bandwidth, double cap):
    cdef double[:, ::1] mp = np.ascontiguousarray(mean_power, dtype=np.float64)
    cdef double[:, ::1] se = np.ascontiguousarray(spectral_eff, dtype=np.float64)
    cdef double[:, ::1] dd = np.ascontiguousarray(dist3d, dtype=np.float64)
    cdef Py_ssize_t m = mp.shape[0]
    cdef Py_ssize_t k1 = mp.shape[1]
    assign_arr = np.zeros(m, dtype=np.int64)
    cdef long long[::1] assign = assign_arr
    cdef Py_ssize_t i, d, best, over, dropped
    cdef double bv, load, fd

    if m == 0:
        return assign_arr
    for i in range(m):
        best = 0
        bv = mp[i, 0]
        for d in range(1, k1):
            if mp[i, d] > bv:
                bv = mp[i, d]
                best = d
        assign[i] = best
    if k1 == 1:
        return assign_arr

    rejected_arr = np.zeros((m, k1), dtype=np.uint8)
    cdef unsigned char[:, ::1] rejected = rejected_arr
    counts_arr = np.zeros(k1, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    sums_arr = np.zeros(k1, dtype=np.float64)
    cdef double[::1] sums = sums_arr
    loads_arr = np.zeros(k1, dtype=np.float64)
    cdef double[::1] loads = loads_arr

    while True:
        for d in range(k1):
            counts[d] = 0
            sums[d] = 0.0
        for i in range(m):
            d = assign[i]
            counts[d] += 1
            sums[d] += se[i, d]
        over = -1
        for d in range(1, k1):
            if counts[d] > 0:
                load = (bandwidth / counts[d]) * sums[d]
            else:
                load = 0.0
            loads[d] = load
            if over < 0 and load > cap:
                over = d
        if over < 0:
            return assign_arr
        dropped = -1
        fd = -1.0
        for i in range(m):
            if assign[i] == over and dd[i, over] > fd:
                fd = dd[i, over]
                dropped = i
        rejected[dropped, over] = 1
        best = -1
        bv = -1.0
        for d in range(k1):
            if rejected[dropped, d]:
                continue
            if d > 0 and loads[d] >= cap:
                continue
            if best < 0 or mp[dropped, d] > bv:
                bv = mp[dropped, d]
                best = d
        assign[dropped] = best

"""Pure-numpy fallback implementations of the hot kernels.

The compiled module ``_kernels_c`` implements the same two functions with
identical semantics; either backend may serve a run.  Algorithms here are
written so the two backends follow the same decision sequence (same
bisection schedule, same summation order via ``bincount``).
"""

import numpy as np


def radial_inverse_cdf(u, beta, hole_radius, max_radius, rel_tol=1e-9):
    """Invert the radial CDF of a density proportional to r*exp(-beta*r).

    Support is [hole_radius, max_radius].  For beta=0 the inverse has a
    closed form; otherwise bisection runs until the bracket is narrower
    than rel_tol * max_radius.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    if beta == 0.0:
        return np.sqrt(hole_radius * hole_radius
                       + u * (max_radius * max_radius - hole_radius * hole_radius))

    def g(r):
        # Antiderivative factor: integral of s*e^(-b s) is -(1+b s)e^(-b s)/b^2,
        # so the CDF is monotone in g(r) = (1+b r)e^(-b r), which decreases in r.
        return np.exp(-beta * r) * (1.0 + beta * r)

    g_lo = g(float(hole_radius))
    g_hi = g(float(max_radius))
    target = g_lo - u * (g_lo - g_hi)

    lo = np.full_like(u, hole_radius)
    hi = np.full_like(u, max_radius)
    tol = rel_tol * max_radius
    active = (hi - lo) > tol
    while active.any():
        mid = 0.5 * (lo + hi)
        past = g(mid) <= target
        hi = np.where(active & past, mid, hi)
        lo = np.where(active & ~past, mid, lo)
        active = (hi - lo) > tol
    return 0.5 * (lo + hi)


def associate(mean_power, spectral_eff, dist3d, bandwidth, cap):
    """Capacity-constrained strongest-average-power association.

    Device column 0 is the (uncapped) base station, columns 1..k are UAVs.
    Every resident first picks the device with the largest mean received
    power.  While any UAV's load exceeds the cap it sheds its farthest
    resident (3-D distance), who re-picks among devices that never dropped
    them and currently sit below the cap; the BS is always eligible.

    Load of a device with n residents is (bandwidth/n) * sum of the
    members' spectral efficiencies.

    Returns the per-resident device index (int64).
    """
    mean_power = np.asarray(mean_power, dtype=np.float64)
    m, k1 = mean_power.shape
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    assign = np.argmax(mean_power, axis=1).astype(np.int64)
    if k1 == 1:
        return assign

    spectral_eff = np.asarray(spectral_eff, dtype=np.float64)
    dist3d = np.asarray(dist3d, dtype=np.float64)
    rejected = np.zeros((m, k1), dtype=bool)
    rows = np.arange(m)
    while True:
        counts = np.bincount(assign, minlength=k1)
        sums = np.bincount(assign, weights=spectral_eff[rows, assign], minlength=k1)
        loads = np.zeros(k1)
        nz = counts > 0
        loads[nz] = (bandwidth / counts[nz]) * sums[nz]
        over = np.flatnonzero(loads[1:] > cap)
        if over.size == 0:
            return assign
        dev = int(over[0]) + 1
        members = np.flatnonzero(assign == dev)
        dropped = int(members[np.argmax(dist3d[members, dev])])
        rejected[dropped, dev] = True
        eligible = ~rejected[dropped]
        eligible[1:] &= loads[1:] < cap
        candidates = np.where(eligible, mean_power[dropped], -np.inf)
        assign[dropped] = int(np.argmax(candidates))

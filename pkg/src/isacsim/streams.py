"""Deterministic random-stream derivation.

Every Monte Carlo round gets its own generator, keyed by the master seed,
a domain tag and the three UAV-distribution coordinates (height, hole
radius, non-homogeneity).  Keying on the coordinate *values* rather than
grid positions means a sweep cell re-run standalone reproduces its rows
exactly, and configs that differ only in powers share placements (common
random numbers across a power scaling).
"""

import numpy as np

SIM_DOMAIN = 0
CAL_DOMAIN = 1


def float_key(x: float) -> int:
    """Map a float to its IEEE-754 bit pattern (a stable nonnegative int)."""
    return int(np.float64(x).view(np.uint64))


def derive_rng(master_seed: int, domain: int, height: float, hole_radius: float,
               beta: float, round_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(
        entropy=(
            int(master_seed),
            int(domain),
            float_key(height),
            float_key(hole_radius),
            float_key(beta),
            int(round_index),
        )
    )
    return np.random.default_rng(ss)

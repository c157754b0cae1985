"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; the numpy fallback is
always available.  ISACSIM_BACKEND={compiled,python} forces a choice at
import time, and set_backend() switches at runtime (used by the parity
tests and the benchmark).
"""

import os

from . import _kernels_py

_IMPLS = {"python": _kernels_py}
try:
    from . import _kernels_c

    _IMPLS["compiled"] = _kernels_c
except ImportError:
    pass

_env = os.environ.get("ISACSIM_BACKEND")
if _env:
    if _env not in _IMPLS:
        raise ImportError(f"ISACSIM_BACKEND={_env!r} is not available "
                          f"(have: {sorted(_IMPLS)})")
    _active = _env
else:
    _active = "compiled" if "compiled" in _IMPLS else "python"


def backend_name() -> str:
    return _active


def available_backends():
    return sorted(_IMPLS)


def set_backend(name: str) -> None:
    if name not in _IMPLS:
        raise ValueError(f"unknown backend {name!r} (have: {sorted(_IMPLS)})")
    global _active
    _active = name


def radial_inverse_cdf(u, beta, hole_radius, max_radius, rel_tol=1e-9):
    return _IMPLS[_active].radial_inverse_cdf(u, beta, hole_radius, max_radius, rel_tol)


def associate(mean_power, spectral_eff, dist3d, bandwidth, cap):
    return _IMPLS[_active].associate(mean_power, spectral_eff, dist3d, bandwidth, cap)

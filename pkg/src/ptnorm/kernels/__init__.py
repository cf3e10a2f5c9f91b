"""Hot numerical kernels with two interchangeable backends.

``numba``
    Loop kernels compiled with ``numba.njit``. Used when numba imports and
    the environment variable ``PTNORM_JIT`` is not set to ``0``.
``numpy``
    Vectorized numpy/scipy implementations with identical signatures.

The active backend's functions are re-exported at module level::

    from ptnorm import kernels
    kernels.laguerre_array(3, 0.5, z)
    kernels.BACKENDS["numpy"].laguerre_array(3, 0.5, z)
"""
import os

from . import _numpy

BACKENDS = {"numpy": _numpy}

try:
    from . import _numba
except ImportError:  # numba not installed
    _numba = None
else:
    BACKENDS["numba"] = _numba


def _select():
    flag = os.environ.get("PTNORM_JIT", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or _numba is None:
        return "numpy"
    return "numba"


BACKEND = _select()
_active = BACKENDS[BACKEND]

laguerre_array = _active.laguerre_array
oval_q_array = _active.oval_q_array
cn_propagate = _active.cn_propagate

__all__ = [
    "BACKEND",
    "BACKENDS",
    "laguerre_array",
    "oval_q_array",
    "cn_propagate",
]

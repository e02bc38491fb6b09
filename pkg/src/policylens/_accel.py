"""Backend selection for the numeric kernels.

Numba is used when it is importable and ``POLICYLENS_DISABLE_NUMBA`` is not
set to a truthy value.  The pure-numpy fallbacks in :mod:`policylens.kernels`
produce the same results (up to floating-point summation order).
"""
from __future__ import annotations

import os

_FALSY = {"", "0", "false", "no", "off"}

try:  # pragma: no cover - depends on the environment
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None


def numba_requested() -> bool:
    return os.environ.get("POLICYLENS_DISABLE_NUMBA", "").strip().lower() in _FALSY


NUMBA_AVAILABLE = _numba is not None
USE_NUMBA = NUMBA_AVAILABLE and numba_requested()


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if _numba is None:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    return _numba.njit(*args, **kwargs)

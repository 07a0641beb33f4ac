"""Optional numba acceleration.

Set ``BESSELHIT_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.  ``njit`` degrades to an identity decorator in that case
so kernel modules can be written once.
"""
import os

_FLAG = "BESSELHIT_DISABLE_NUMBA"


def _disabled_by_env():
    return os.environ.get(_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


try:
    if _disabled_by_env():
        raise ImportError(f"numba disabled by {_FLAG}")
    import numba as _numba
except ImportError:
    _numba = None

HAVE_NUMBA = _numba is not None


def njit(*args, **kwargs):
    if HAVE_NUMBA:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def default_backend():
    return "numba" if HAVE_NUMBA else "numpy"

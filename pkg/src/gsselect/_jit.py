"""Numba switch.

Set ``GS_SELECT_NUMBA=0`` to force the pure-numpy kernels. When numba is not
importable the numpy path is used regardless.
"""
import os

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    _njit = None
    HAVE_NUMBA = False


def _flag_enabled(value):
    return value.strip().lower() not in ("0", "false", "no", "off", "")


USE_NUMBA = HAVE_NUMBA and _flag_enabled(os.environ.get("GS_SELECT_NUMBA", "1"))

cache = True


def njit(f):
    """Compile ``f`` in nopython mode if numba is present, else return it unchanged."""
    if not HAVE_NUMBA:
        return f
    return _njit(cache=cache, nogil=True)(f)

"""Numba switch.

Set ``VCCEVAL_DISABLE_NUMBA=1`` to force the pure Python/numpy paths. Numba is
also skipped silently when it is not importable.
"""
import os

DISABLED = os.environ.get("VCCEVAL_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if DISABLED:
        raise ImportError("disabled by VCCEVAL_DISABLE_NUMBA")
    from numba import njit as _njit
    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover - depends on environment
    _njit = None
    NUMBA_ENABLED = False


def maybe_njit(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if not NUMBA_ENABLED:
        return fn
    return _njit(cache=True, nogil=True)(fn)

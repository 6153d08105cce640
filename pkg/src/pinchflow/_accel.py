"""Optional numba acceleration.

Setting ``PINCHFLOW_DISABLE_NUMBA=1`` (or running without numba installed)
selects the pure-numpy code paths.  ``PINCHFLOW_THREADS`` caps the numba
thread pool.
"""
import os

_DISABLED = os.environ.get("PINCHFLOW_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def set_threads(count=None):
    """Apply a thread-count override (argument or ``PINCHFLOW_THREADS``)."""
    if count is None:
        raw = os.environ.get("PINCHFLOW_THREADS")
        if not raw:
            return None
        count = int(raw)
    if count < 1:
        raise ValueError("thread count must be positive")
    if HAVE_NUMBA:
        count = min(count, numba.config.NUMBA_NUM_THREADS)
        numba.set_num_threads(count)
    return count

"""Pick the local-moving sweep implementation.

The compiled kernel is used when it imports; otherwise the pure-Python one.
Set ``ECHOTRACK_BACKEND=python`` to force the fallback.
"""
import os

from . import _sweep_py

try:
    from . import _sweep as _sweep_c
except ImportError:  # extension not built
    _sweep_c = None

BACKENDS = {"python": _sweep_py.sweep}
if _sweep_c is not None:
    BACKENDS["cython"] = _sweep_c.sweep

DEFAULT_BACKEND = "cython" if _sweep_c is not None and os.environ.get("ECHOTRACK_BACKEND") != "python" else "python"


def get_sweep(backend: str = "auto"):
    if backend == "auto":
        backend = DEFAULT_BACKEND
    try:
        return backend, BACKENDS[backend]
    except KeyError:
        raise ValueError(f"sweep backend {backend!r} unavailable; have {sorted(BACKENDS)}") from None

"""Pick the kernel implementation.

``ABELVORTEX_BACKEND=numpy`` forces the numpy kernels; ``numba`` (the default
when numba imports) uses the compiled loops.
"""

import importlib
import os
import warnings

ENV_VAR = "ABELVORTEX_BACKEND"
BACKENDS = ("numba", "numpy")

_cache = {}


def numba_available() -> bool:
    try:
        importlib.import_module("numba")
    except ImportError:
        return False
    return True


def resolve(name=None) -> str:
    name = (name or os.environ.get(ENV_VAR, "")).strip().lower() or None
    if name is None:
        return "numba" if numba_available() else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not numba_available():
        warnings.warn("numba is not installed, falling back to numpy kernels")
        return "numpy"
    return name


def kernels(name=None):
    """Module holding the kernels for ``name`` (or the configured default)."""
    name = resolve(name)
    if name not in _cache:
        _cache[name] = importlib.import_module(f"._kernels_{name}", __package__)
    return _cache[name]

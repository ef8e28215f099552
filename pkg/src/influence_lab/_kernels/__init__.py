"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is used otherwise, or when INFLUENCE_LAB_PURE_PYTHON is set to a
non-empty value. Both backends implement the same three functions with
identical results (the compiled one only avoids reshape copies).
"""

from __future__ import annotations

import os

from . import _fiberops_py

try:
    from . import _fiberops as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

_forced_python = bool(os.environ.get("INFLUENCE_LAB_PURE_PYTHON"))
BACKEND = "cython" if _compiled is not None and not _forced_python else "python"

_impl = _compiled if BACKEND == "cython" else _fiberops_py

nonconstant_mask = _impl.nonconstant_mask
ones_per_fiber = _impl.ones_per_fiber
mean_var_per_fiber = _impl.mean_var_per_fiber


def available_backends() -> tuple[str, ...]:
    return ("cython", "python") if _compiled is not None else ("python",)


def set_backend(name: str) -> str:
    """Switch the active backend (used by the benchmark and parity tests)."""
    global BACKEND, nonconstant_mask, ones_per_fiber, mean_var_per_fiber
    if name == "cython":
        if _compiled is None:
            raise ValueError("compiled kernels are not available")
        impl = _compiled
    elif name == "python":
        impl = _fiberops_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name
    nonconstant_mask = impl.nonconstant_mask
    ones_per_fiber = impl.ones_per_fiber
    mean_var_per_fiber = impl.mean_var_per_fiber
    return BACKEND

"""Backend selection for the hot kernels.

The compiled extension is used when importable; otherwise the numpy versions in
:mod:`pointspec._pykernels` are used. Setting ``POINTSPEC_PURE=1`` forces the
numpy path. Both backends expose the same five functions.
"""
from __future__ import annotations

import os
from types import ModuleType

from pointspec import _pykernels

__all__ = [
    "BACKEND",
    "pair_distances",
    "gamma_batch",
    "gamma_imag",
    "distance_form",
    "gap_form",
    "get_backend",
]


def _load_compiled() -> ModuleType | None:
    if os.environ.get("POINTSPEC_PURE") == "1":
        return None
    try:
        from pointspec import _ckernels
    except ImportError:
        return None
    return _ckernels


def get_backend(name: str) -> ModuleType:
    """Return the kernel module ``"python"`` or ``"compiled"`` (for benchmarks/tests)."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        mod = _load_compiled()
        if mod is None:
            raise ImportError("compiled kernels are not built")
        return mod
    raise ValueError(f"unknown backend {name!r}")


_impl = _load_compiled() or _pykernels
BACKEND = "compiled" if _impl is not _pykernels else "python"

pair_distances = _impl.pair_distances
gamma_batch = _impl.gamma_batch
gamma_imag = _impl.gamma_imag
distance_form = _impl.distance_form
gap_form = _impl.gap_form

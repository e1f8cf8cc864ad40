"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``LAMPRATE_PURE_PYTHON=1`` to force the fallback.  ``IMPLEMENTATION``
names the active choice.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels as python_kernels

compiled_kernels = None
if not os.environ.get("LAMPRATE_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_kernels  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_kernels = None

IMPLEMENTATION = "compiled" if compiled_kernels is not None else "python"

_INT64_SAFE = 1 << 60


def _as_array(dist):
    """int64 array when the integers are small enough, None to stay on Python ints."""
    if isinstance(dist, np.ndarray):
        return np.ascontiguousarray(dist)
    n = len(dist)
    flat = [v for row in dist for v in row]
    if all(isinstance(v, int) for v in flat):
        if max(flat, default=0) * max(n, 1) >= _INT64_SAFE:
            return None
        return np.array(flat, dtype=np.int64).reshape(n, n)
    return np.array(flat, dtype=np.float64).reshape(n, n)


def _to_py(v):
    return v.item() if isinstance(v, np.generic) else v


def held_karp(dist, impl=None):
    mod = impl or (compiled_kernels if compiled_kernels is not None else python_kernels)
    if mod is compiled_kernels and mod is not None:
        arr = _as_array(dist)
        if arr is not None:
            cost, order = mod.held_karp(arr)
            return _to_py(cost), order
        mod = python_kernels
    return mod.held_karp(dist)


def two_opt(dist, order, impl=None):
    mod = impl or (compiled_kernels if compiled_kernels is not None else python_kernels)
    if mod is compiled_kernels and mod is not None:
        arr = _as_array(dist)
        if arr is not None:
            cost, seq = mod.two_opt(arr, order)
            return _to_py(cost), seq
        mod = python_kernels
    return mod.two_opt(dist, order)


def prefix_span(words, weights, offset, impl=None):
    mod = impl or (compiled_kernels if compiled_kernels is not None else python_kernels)
    if mod is compiled_kernels and mod is not None:
        w = np.asarray(weights, dtype=np.int64)
        if int(w.max(initial=0)) * (sum(len(x) for x in words) + 1) < _INT64_SAFE:
            return int(mod.prefix_span(list(words), w, offset))
        mod = python_kernels
    return mod.prefix_span(words, weights, offset)

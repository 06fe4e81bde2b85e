"""Hot kernels: the compiled extension when it imports, else the Python twin.

Set ``TORSIONSCOPE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _reduce_py

_MAX_NATIVE_P = 2**31

try:
    if os.environ.get("TORSIONSCOPE_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _reduce as _native  # type: ignore[attr-defined]
except ImportError:
    _native = None

BACKEND = "cython" if _native is not None else "python"


def reduce_columns(indptr, indices, data, n_rows, p, return_columns=False, backend=None):
    """Column-reduce a CSC matrix over Z/p; see :func:`_reduce_py.reduce_columns`."""
    backend = backend or BACKEND
    if backend == "cython" and _native is not None and p < _MAX_NATIVE_P:
        return _native.reduce_columns(
            np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int64),
            np.ascontiguousarray(data, dtype=np.int64),
            int(n_rows),
            int(p),
            return_columns,
        )
    if backend not in ("cython", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    return _reduce_py.reduce_columns(indptr, indices, data, n_rows, p, return_columns)


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _native is not None else [])

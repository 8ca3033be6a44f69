"""Kernel backend selection: compiled Cython core with a NumPy fallback.

Set ``HETNOMA_DISABLE_EXT=1`` to force the fallback.  Both backends apply
the identical pair predicate; ``candidate_pairs`` canonicalizes the order so
downstream random-number consumption is backend-independent.
"""
from __future__ import annotations

import os

import numpy as np

from . import _fallback

_impl = _fallback
if not os.environ.get("HETNOMA_DISABLE_EXT"):
    try:
        from . import _core as _ext

        _impl = _ext
    except ImportError:
        pass


def backend_name() -> str:
    return _impl.BACKEND


def candidate_pairs(x: np.ndarray, y: np.ndarray, offsets: np.ndarray, radius: float):
    """Within-trial pairs (i < j, global indices) with d^2 <= radius^2,
    sorted lexicographically by (i, j)."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    ii, jj = _impl.collect_pairs(x, y, offsets, float(radius))
    if len(ii) == 0:
        return ii, jj
    order = np.lexsort((jj, ii))
    return ii[order], jj[order]


def min_neighbor_mark(n: int, ii: np.ndarray, jj: np.ndarray, marks: np.ndarray) -> np.ndarray:
    marks = np.ascontiguousarray(marks, dtype=np.float64)
    if len(ii) == 0:
        return np.full(n, np.inf)
    return _impl.min_neighbor_mark(
        int(n),
        np.ascontiguousarray(ii, dtype=np.int64),
        np.ascontiguousarray(jj, dtype=np.int64),
        marks,
    )

"""Pure-NumPy implementations of the Monte Carlo hot kernels.

Selected at import time when the compiled extension is unavailable (or when
``HETNOMA_DISABLE_EXT`` is set).  Must be numerically identical to the
extension: same pair predicate (d^2 <= radius^2 in double precision), same
retention reduction.
"""
from __future__ import annotations

import numpy as np

try:
    from scipy.spatial import cKDTree
except ImportError:  # pragma: no cover
    cKDTree = None

_BRUTE_LIMIT = 64
_triu_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _triu_cache:
        p, q = np.triu_indices(n, k=1)
        _triu_cache[n] = (p.astype(np.int64), q.astype(np.int64))
    return _triu_cache[n]


def collect_pairs(x: np.ndarray, y: np.ndarray, offsets: np.ndarray, radius: float):
    """All within-trial pairs (i < j, global indices) with d^2 <= radius^2.

    Order is unspecified; the shared wrapper canonicalizes.
    """
    counts = np.diff(offsets)
    r2 = radius * radius
    out_i: list[np.ndarray] = []
    out_j: list[np.ndarray] = []
    if counts.size and counts.max() <= _BRUTE_LIMIT:
        # group trials by size so the triu index tables are reused
        for n in np.unique(counts):
            if n < 2:
                continue
            starts = offsets[:-1][counts == n]
            p, q = _triu(int(n))
            ii = (starts[:, None] + p[None, :]).ravel()
            jj = (starts[:, None] + q[None, :]).ravel()
            d2 = (x[ii] - x[jj]) ** 2 + (y[ii] - y[jj]) ** 2
            keep = d2 <= r2
            out_i.append(ii[keep])
            out_j.append(jj[keep])
    else:
        for t in range(counts.size):
            lo, hi = int(offsets[t]), int(offsets[t + 1])
            n = hi - lo
            if n < 2:
                continue
            if n <= _BRUTE_LIMIT or cKDTree is None:
                p, q = _triu(n)
                ii, jj = lo + p, lo + q
            else:
                tree = cKDTree(np.column_stack([x[lo:hi], y[lo:hi]]))
                pr = tree.query_pairs(radius * (1.0 + 1e-9), output_type="ndarray")
                if len(pr) == 0:
                    continue
                ii, jj = lo + pr[:, 0].astype(np.int64), lo + pr[:, 1].astype(np.int64)
            d2 = (x[ii] - x[jj]) ** 2 + (y[ii] - y[jj]) ** 2
            keep = d2 <= r2
            out_i.append(ii[keep])
            out_j.append(jj[keep])
    if not out_i:
        z = np.empty(0, np.int64)
        return z, z.copy()
    return np.concatenate(out_i), np.concatenate(out_j)


def min_neighbor_mark(n: int, ii: np.ndarray, jj: np.ndarray, marks: np.ndarray) -> np.ndarray:
    """Per point, the minimum mark among its neighbors (inf if isolated)."""
    best = np.full(n, np.inf)
    np.minimum.at(best, ii, marks[jj])
    np.minimum.at(best, jj, marks[ii])
    return best


BACKEND = "fallback"

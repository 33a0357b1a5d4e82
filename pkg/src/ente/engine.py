"""Batched exact k-nearest-neighbor distances and fixed-radius counts (max norm).

Each chunk is one independent search problem: a pooled point cloud that is
both search space and reference set. The estimator needs, per chunk, the
distance from every point to its k-th nearest neighbor in the joint space
and strict within-radius neighbor counts in the marginal (column-subset)
spaces using those distances as per-point radii.

All searches are exact. Points are swept in order of their first coordinate,
which prunes candidates whose first-coordinate gap already exceeds the
current distance bound; every surviving candidate's max-norm distance is
evaluated in full, so results are identical to an O(n^2) scan. Outputs are
bit-identical for any worker count: each reference point writes only its own
output slot and every pairwise distance is computed the same way regardless
of schedule.
"""

import os
from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np
from numba import njit, prange

from .exceptions import KTooLarge, ShapeMismatch

_INF = np.inf


def set_workers(n: int) -> int:
    """Set the worker count (performance only, never affects results).

    Clamped to the threads available to the runtime; returns the count in
    effect.
    """
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def max_workers() -> int:
    return numba.config.NUMBA_NUM_THREADS


@dataclass(frozen=True)
class Chunk:
    """One search-problem instance: an [n x dim] point matrix."""

    points: np.ndarray
    chunk_id: int = 0

    def __post_init__(self):
        p = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if p.ndim != 2 or p.shape[0] < 2 or p.shape[1] < 1:
            raise ShapeMismatch(f"chunk needs an [n>=2 x dim>=1] matrix, got {p.shape}")
        if not np.isfinite(p).all():
            raise ShapeMismatch("chunk contains non-finite values")
        object.__setattr__(self, "points", p)


@dataclass(frozen=True)
class NeighborCounts:
    """Per-point k-th neighbor distances and strict radius counts per marginal."""

    kth_distance: np.ndarray
    radius_counts: tuple


@njit(cache=True, parallel=True)
def _kth_sweep(sub, order, key, k):
    n, dim = sub.shape
    eps = np.empty(n)
    for p in prange(n):
        i = order[p]
        ref = sub[i]
        kd = np.empty(k)
        filled = 0
        bound = _INF
        left = p - 1
        right = p + 1
        while left >= 0 or right < n:
            gl = key[p] - key[left] if left >= 0 else _INF
            gr = key[right] - key[p] if right < n else _INF
            if filled == k and gl >= bound and gr >= bound:
                break
            if gl <= gr:
                j = order[left]
                left -= 1
            else:
                j = order[right]
                right += 1
            # trailing coordinates first: they are least correlated with the
            # sort column, so the early exit fires sooner
            d = 0.0
            ok = True
            for c in range(dim - 1, -1, -1):
                ad = abs(ref[c] - sub[j, c])
                if ad > d:
                    d = ad
                    if filled == k and d >= bound:
                        ok = False
                        break
            if not ok:
                continue
            if filled < k:
                pos = filled
                while pos > 0 and kd[pos - 1] > d:
                    kd[pos] = kd[pos - 1]
                    pos -= 1
                kd[pos] = d
                filled += 1
                if filled == k:
                    bound = kd[k - 1]
            elif d < bound:
                pos = k - 1
                while pos > 0 and kd[pos - 1] > d:
                    kd[pos] = kd[pos - 1]
                    pos -= 1
                kd[pos] = d
                bound = kd[k - 1]
        eps[i] = kd[k - 1]
    return eps


@njit(cache=True, parallel=True)
def _count_sweep(sub, order, key, radii):
    n, dim = sub.shape
    counts = np.zeros(n, dtype=np.int64)
    for p in prange(n):
        i = order[p]
        ref = sub[i]
        r_i = radii[i]
        c_total = 0
        q = p - 1
        # the sweep window already enforces |first-coordinate gap| < r_i, so
        # only the remaining coordinates need checking (trailing ones first)
        while q >= 0 and key[p] - key[q] < r_i:
            j = order[q]
            inside = True
            for c in range(dim - 1, 0, -1):
                if abs(ref[c] - sub[j, c]) >= r_i:
                    inside = False
                    break
            if inside:
                c_total += 1
            q -= 1
        q = p + 1
        while q < n and key[q] - key[p] < r_i:
            j = order[q]
            inside = True
            for c in range(dim - 1, 0, -1):
                if abs(ref[c] - sub[j, c]) >= r_i:
                    inside = False
                    break
            if inside:
                c_total += 1
            q += 1
        counts[i] = c_total
    return counts


def _prepared(points: np.ndarray):
    sub = np.ascontiguousarray(points)
    key0 = sub[:, 0]
    order = np.argsort(key0, kind="stable")
    return sub, order, key0[order]


def knn_kth_distances(chunk: Chunk, k: int) -> np.ndarray:
    """Distance from each point to its k-th nearest neighbor, self excluded."""
    n = chunk.points.shape[0]
    if k < 1 or k > n - 1:
        raise KTooLarge(f"k={k} not in [1, n-1] for n={n}")
    sub, order, key = _prepared(chunk.points)
    return _kth_sweep(sub, order, key, k)


def radius_counts(chunk: Chunk, radii: np.ndarray) -> np.ndarray:
    """Number of points j != i with maxnorm(p_i, p_j) strictly below radii[i]."""
    radii = np.ascontiguousarray(np.asarray(radii, dtype=np.float64))
    n = chunk.points.shape[0]
    if radii.shape != (n,):
        raise ShapeMismatch(f"radii shape {radii.shape} does not match n={n}")
    if (radii < 0).any():
        raise ShapeMismatch("radii must be nonnegative")
    sub, order, key = _prepared(chunk.points)
    return _count_sweep(sub, order, key, radii)


def _search_one(chunk: Chunk, marginals: Sequence[Sequence[int]], k: int) -> NeighborCounts:
    eps = knn_kth_distances(chunk, k)
    counts = []
    for cols in marginals:
        cols = np.asarray(cols, dtype=np.intp)
        if cols.size < 1 or cols.min() < 0 or cols.max() >= chunk.points.shape[1]:
            raise ShapeMismatch(f"marginal columns {cols} out of range")
        proj = Chunk(chunk.points[:, cols], chunk.chunk_id)
        counts.append(radius_counts(proj, eps))
    return NeighborCounts(eps, tuple(counts))


def batch_search(items, k: int):
    """Run kNN + marginal radius counts for many chunks.

    items is a sequence of (Chunk, marginal column-index lists). Returns one
    slot per chunk, in input order: a NeighborCounts on success or the raised
    exception for that chunk (other chunks are unaffected).
    """
    results = []
    for chunk, marginals in items:
        try:
            results.append(_search_one(chunk, marginals, k))
        except Exception as exc:  # noqa: BLE001 - slot carries the per-chunk error
            results.append(exc)
    return results


def default_workers() -> int:
    return int(os.environ.get("ENTE_WORKERS", max_workers()))

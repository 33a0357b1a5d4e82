"""Nearest-neighbor (KSG-style) transfer entropy from pooled point sets.

The estimate fixes k neighbors in the joint space and counts strictly-within
neighbors in the three marginal projections using the joint k-th distances as
per-point radii; the counts combine through digamma terms. Output is in nats.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from .embedding import PointSetBundle
from .engine import Chunk, batch_search
from .exceptions import DegenerateData, DomainError, KTooLarge

EULER_GAMMA = 0.5772156649015329


def digamma(x):
    """Digamma function for positive arguments (scalar or array)."""
    x = np.asarray(x, dtype=np.float64)
    if (x <= 0).any():
        raise DomainError("digamma requires x > 0")
    out = special.digamma(x)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TermCounts:
    """Neighbor counts per pooled point in the three marginal spaces."""

    k: int
    n_ypast: np.ndarray
    n_y_ypast: np.ndarray
    n_ypast_xpast: np.ndarray


def te_from_counts(counts: TermCounts) -> float:
    """psi(k) + <psi(n_ypast+1) - psi(n_y_ypast+1) - psi(n_ypast_xpast+1)>.

    The per-point terms are sorted before averaging so the result is exactly
    invariant under any reordering of the pooled points (the float summation
    order becomes canonical).
    """
    bracket = (special.digamma(counts.n_ypast + 1.0)
               - special.digamma(counts.n_y_ypast + 1.0)
               - special.digamma(counts.n_ypast_xpast + 1.0))
    return float(special.digamma(counts.k) + np.mean(np.sort(bracket)))


def _jittered_joint(bundle: PointSetBundle, jitter_amplitude: float, seed) -> np.ndarray:
    joint = np.array(bundle.joint, dtype=np.float64, copy=True)
    if jitter_amplitude > 0:
        rng = np.random.default_rng(seed)
        std = joint.std(axis=0)
        half_width = jitter_amplitude * std
        joint += rng.uniform(-1.0, 1.0, size=joint.shape) * half_width
    return joint


def _marginal_cols(bundle: PointSetBundle):
    return (bundle.cols_ypast, bundle.cols_y_ypast, bundle.cols_ypast_xpast)


def estimate_te_batch(bundles, k: int, jitter_amplitude: float = 1e-8, seeds=None):
    """Estimate TE for many bundles through one batched neighbor search.

    seeds gives one jitter stream per bundle (ignored when jitter is off).
    Returns a list of TE values in nats, in input order.
    """
    bundles = list(bundles)
    if seeds is None:
        seeds = range(len(bundles))
    items = []
    for bundle, seed in zip(bundles, seeds, strict=True):
        if bundle.n_rows <= k:
            raise KTooLarge(f"need more than k={k} pooled points, got {bundle.n_rows}")
        joint = _jittered_joint(bundle, jitter_amplitude, seed)
        if np.ptp(joint, axis=0).max() == 0.0:
            raise DegenerateData("all pooled points are identical")
        items.append((Chunk(joint), _marginal_cols(bundle)))
    results = batch_search(items, k)
    te_values = []
    for res in results:
        if isinstance(res, Exception):
            raise res
        nc = TermCounts(k, res.radius_counts[0], res.radius_counts[1], res.radius_counts[2])
        te_values.append(te_from_counts(nc))
    return te_values


def estimate_te(bundle: PointSetBundle, k: int,
                jitter_amplitude: float = 1e-8, seed=0) -> float:
    """TE estimate in nats for one pooled point-set bundle."""
    return estimate_te_batch([bundle], k, jitter_amplitude, [seed])[0]

"""Delay embedding, embedding-parameter optimization, and point-set assembly.

The estimator works on four pooled point clouds derived from a source/target
channel pair: the joint space (y_t, y-past state, x-past state) and its three
coordinate projections. Rows are pooled over all repetitions and all times t'
inside the analysis window, repetition index outer, time inner.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .data import EmbeddingSpec, EnsembleSeries
from .exceptions import IndexUnderflow, InsufficientData, ShapeMismatch


def embed_past_state(series: EnsembleSeries, spec: EmbeddingSpec, r: int, t: int) -> np.ndarray:
    """Embedded state (v_t, v_{t-tau}, ..., v_{t-(dim-1)tau}), most recent first.

    r and t are 1-based. Requires t - (dim-1)*delay >= 1.
    """
    if t - (spec.dim - 1) * spec.delay < 1:
        raise IndexUnderflow(
            f"t={t} too small for dim={spec.dim}, delay={spec.delay}")
    if not 1 <= r <= series.n_repetitions:
        raise IndexUnderflow(f"repetition {r} out of range")
    idx = t - 1 - spec.delay * np.arange(spec.dim)
    return series.values[r - 1, idx]


@dataclass(frozen=True)
class PointSetBundle:
    """Joint point cloud plus the column layout of its three marginals.

    Joint columns are [y_t | y-past (d_y) | x-past (d_x)]. Marginal matrices
    are column slices of the joint, so projection consistency holds by
    construction (jitter applied to the joint carries over exactly).
    """

    joint: np.ndarray
    d_y: int
    d_x: int
    row_origin: np.ndarray  # [M x 2] of 1-based (r, t') pairs

    @property
    def n_rows(self) -> int:
        return self.joint.shape[0]

    @property
    def cols_ypast(self) -> np.ndarray:
        return np.arange(1, 1 + self.d_y)

    @property
    def cols_y_ypast(self) -> np.ndarray:
        return np.arange(0, 1 + self.d_y)

    @property
    def cols_ypast_xpast(self) -> np.ndarray:
        return np.arange(1, 1 + self.d_y + self.d_x)

    @property
    def marg_ypast(self) -> np.ndarray:
        return self.joint[:, self.cols_ypast]

    @property
    def marg_y_ypast(self) -> np.ndarray:
        return self.joint[:, self.cols_y_ypast]

    @property
    def marg_ypast_xpast(self) -> np.ndarray:
        return self.joint[:, self.cols_ypast_xpast]


def assemble_pointsets(source: EnsembleSeries, target: EnsembleSeries,
                       spec_x: EmbeddingSpec, spec_y: EmbeddingSpec,
                       u: int, window: tuple) -> PointSetBundle:
    """Pool embedded rows (y_t', y-past at t'-1, x-past at t'-u) over (r, t').

    window is the inclusive 1-based interval [t_lo, t_hi]. Every t' in the
    window must be embeddable; otherwise IndexUnderflow (no silent
    truncation).
    """
    if source.values.shape != target.values.shape:
        raise ShapeMismatch(
            f"source {source.values.shape} and target {target.values.shape} differ")
    t_lo, t_hi = int(window[0]), int(window[1])
    if t_lo > t_hi:
        raise ShapeMismatch(f"window start {t_lo} exceeds end {t_hi}")
    n = target.n_samples
    if t_hi > n:
        raise IndexUnderflow(f"window end {t_hi} exceeds series length {n}")
    y_first = t_lo - 1 - (spec_y.dim - 1) * spec_y.delay
    x_first = t_lo - u - (spec_x.dim - 1) * spec_x.delay
    if y_first < 1:
        raise IndexUnderflow(
            f"target past underflows at t'={t_lo} (dim={spec_y.dim}, delay={spec_y.delay})")
    if x_first < 1:
        raise IndexUnderflow(
            f"source past underflows at t'={t_lo}, u={u} "
            f"(dim={spec_x.dim}, delay={spec_x.delay})")

    reps = target.n_repetitions
    times = np.arange(t_lo, t_hi + 1)  # 1-based t'
    w = times.size
    m = reps * w
    d_y, d_x = spec_y.dim, spec_x.dim

    joint = np.empty((m, 1 + d_y + d_x))
    yv, xv = target.values, source.values
    joint[:, 0] = yv[:, times - 1].reshape(m)
    for j in range(d_y):
        joint[:, 1 + j] = yv[:, times - 2 - j * spec_y.delay].reshape(m)
    for j in range(d_x):
        joint[:, 1 + d_y + j] = xv[:, times - 1 - u - j * spec_x.delay].reshape(m)

    origin = np.empty((m, 2), dtype=np.int64)
    origin[:, 0] = np.repeat(np.arange(1, reps + 1), w)
    origin[:, 1] = np.tile(times, reps)
    return PointSetBundle(joint, d_y, d_x, origin)


@njit(cache=True, parallel=True)
def _local_predictor_sq_errors(values, d, tau, anchors_r, anchors_t, k_pred):
    # anchors_t holds 0-based indices of the most recent embedded sample;
    # neighbors come only from other repetitions, scanned r asc, t asc, with
    # strict-improvement replacement so results are order-stable.
    n_rep, n_samp = values.shape
    span_lo = (d - 1) * tau
    n_anchor = anchors_r.shape[0]
    errs = np.empty(n_anchor)
    for a in prange(n_anchor):
        r0 = anchors_r[a]
        t0 = anchors_t[a]
        best_d = np.full(k_pred, np.inf)
        best_v = np.zeros(k_pred)
        filled = 0
        for r2 in range(n_rep):
            if r2 == r0:
                continue
            for t2 in range(span_lo, n_samp - 1):
                dist = 0.0
                for c in range(d):
                    ad = abs(values[r0, t0 - c * tau] - values[r2, t2 - c * tau])
                    if ad > dist:
                        dist = ad
                        if dist >= best_d[k_pred - 1]:
                            break
                if dist < best_d[k_pred - 1]:
                    pos = k_pred - 1
                    while pos > 0 and best_d[pos - 1] > dist:
                        best_d[pos] = best_d[pos - 1]
                        best_v[pos] = best_v[pos - 1]
                        pos -= 1
                    best_d[pos] = dist
                    best_v[pos] = values[r2, t2 + 1]
                    if filled < k_pred:
                        filled += 1
        pred = 0.0
        for q in range(k_pred):
            pred += best_v[q]
        pred /= k_pred
        diff = pred - values[r0, t0 + 1]
        errs[a] = diff * diff
    return errs


def optimize_embedding(series: EnsembleSeries, d_candidates, tau_candidates,
                       k_pred: int = 4, sample_budget: int = 1000, seed: int = 0):
    """Pick (dim, delay) minimizing the local-predictor mean squared error.

    For each candidate, up to sample_budget anchors are pooled across
    repetitions; each anchor's next sample is predicted as the mean of the
    next samples of its k_pred nearest embedded neighbors (max norm, other
    repetitions only). Ties in MSE break to the smallest span dim*delay,
    then smallest dim, then smallest delay. Returns (EmbeddingSpec, table)
    where table maps (dim, delay) -> MSE.
    """
    d_candidates = sorted(set(int(d) for d in d_candidates))
    tau_candidates = sorted(set(int(t) for t in tau_candidates))
    if not d_candidates or not tau_candidates:
        raise InsufficientData("candidate lists must be nonempty")
    if sample_budget < k_pred + 1:
        raise InsufficientData("sample_budget must exceed k_pred")
    values = series.values
    n_rep, n_samp = values.shape
    if n_rep < 2:
        raise InsufficientData("need >= 2 repetitions for cross-repetition neighbors")

    table = {}
    for d in d_candidates:
        for tau in tau_candidates:
            span_lo = (d - 1) * tau  # 0-based minimum anchor index
            n_t = n_samp - 1 - span_lo  # anchors also need a next sample
            if n_t < 1 or (n_rep - 1) * n_t < k_pred:
                raise InsufficientData(
                    f"no usable anchors/neighbors for dim={d}, delay={tau}")
            total = n_rep * n_t
            rng = np.random.default_rng(np.random.SeedSequence((seed, d, tau)))
            if total > sample_budget:
                pick = np.sort(rng.choice(total, size=sample_budget, replace=False))
            else:
                pick = np.arange(total)
            anchors_r = (pick // n_t).astype(np.int64)
            anchors_t = (span_lo + pick % n_t).astype(np.int64)
            errs = _local_predictor_sq_errors(values, d, tau, anchors_r, anchors_t, k_pred)
            table[(d, tau)] = float(np.mean(errs))

    best = min(table, key=lambda dt: (table[dt], dt[0] * dt[1], dt[0], dt[1]))
    return EmbeddingSpec(best[0], best[1]), table

"""Surrogate-based significance testing and delay scanning for channel pairs.

The null distribution comes from shuffling repetition labels of the target
channel: each surrogate applies a random permutation phi to the target's
repetitions, leaving every repetition's time course intact while destroying
the source-target alignment. The p-value is the fraction of surrogate test
statistics at least as large as the original's.

When several assumed delays u are scanned, simply testing at the selected
delay is anti-conservative: the selection maximizes over noise, so null
p-values pile up near zero. The default "max" scan statistic therefore
computes, for the original data and for every surrogate alike, the maximum
TE over a fixed delay grid (the same S permutations reused at every grid
delay), which keeps the permutation test exact under scanning.
"""

from dataclasses import dataclass

import numpy as np

from .data import AnalysisConfig, EnsembleSeries, TEResult, validate_ensemble
from .embedding import EmbeddingSpec, PointSetBundle, assemble_pointsets
from .exceptions import InvalidPermutation, UnknownMethod
from .ksg import estimate_te_batch


@dataclass(frozen=True)
class SurrogateSpec:
    """A repetition permutation phi and the seed it was drawn from."""

    permutation: np.ndarray  # phi as 0-based index array, length R
    seed: object = None

    def __post_init__(self):
        perm = np.asarray(self.permutation, dtype=np.int64)
        object.__setattr__(self, "permutation", perm)
        if sorted(perm.tolist()) != list(range(perm.size)):
            raise InvalidPermutation("not a bijection on {0..R-1}")


def draw_permutation(n_repetitions: int, seed, strict: bool = True) -> SurrogateSpec:
    """Draw a random permutation; with strict=True, phi(r) != r for every r."""
    if n_repetitions < 2 and strict:
        raise InvalidPermutation("strict permutation needs R >= 2")
    rng = np.random.default_rng(seed)
    while True:
        perm = rng.permutation(n_repetitions)
        if not strict or not np.any(perm == np.arange(n_repetitions)):
            return SurrogateSpec(perm, seed)


def shuffle_target(target: EnsembleSeries, spec: SurrogateSpec) -> EnsembleSeries:
    """Return the target with row r replaced by row phi(r); input untouched."""
    if spec.permutation.size != target.n_repetitions:
        raise InvalidPermutation(
            f"permutation length {spec.permutation.size} != R={target.n_repetitions}")
    return EnsembleSeries(target.channel_name,
                          target.values[spec.permutation],
                          target.sample_rate)


def permutation_pvalue(te_original: float, te_surrogates, conservative: bool = False) -> float:
    """Fraction of surrogate TE values >= the original.

    conservative=True uses (count+1)/(S+1), which never returns exactly 0.
    """
    te_surrogates = np.asarray(te_surrogates, dtype=np.float64)
    s = te_surrogates.size
    if s < 1:
        raise ValueError("need at least one surrogate value")
    count = int(np.sum(te_surrogates >= te_original))
    if conservative:
        return (count + 1) / (s + 1)
    return count / s


def correct_multiple(pvalues, alpha: float, method: str = "bonferroni"):
    """Multiple-comparison decisions for a family of p-values.

    bonferroni: p < alpha/m. fdr: Benjamini-Hochberg step-up. none: p < alpha.
    """
    p = np.asarray(pvalues, dtype=np.float64)
    m = p.size
    if method == "none":
        return (p < alpha).tolist()
    if method == "bonferroni":
        return (p < alpha / m).tolist()
    if method == "fdr":
        order = np.argsort(p, kind="stable")
        sorted_p = p[order]
        thresholds = alpha * (np.arange(1, m + 1) / m)
        passing = np.nonzero(sorted_p <= thresholds)[0]
        decisions = np.zeros(m, dtype=bool)
        if passing.size:
            cutoff = sorted_p[passing[-1]]
            decisions = p <= cutoff
        return decisions.tolist()
    raise UnknownMethod(f"unknown correction method {method!r}")


def _surrogate_seed(master_seed, index: int):
    return np.random.SeedSequence((master_seed, index))


def _permuted_bundle(bundle: PointSetBundle, permutation: np.ndarray,
                     window_width: int) -> PointSetBundle:
    """Point sets of the surrogate pair (source, shuffle_target(target, phi)).

    Rows are ordered repetition-outer/time-inner, so shuffling the target's
    repetitions is exactly a block-row permutation of the y columns of the
    already assembled joint matrix; the x columns stay in place.
    """
    rows = (permutation[:, None] * window_width
            + np.arange(window_width)[None, :]).ravel()
    joint = bundle.joint.copy()
    joint[:, :1 + bundle.d_y] = bundle.joint[rows, :1 + bundle.d_y]
    return PointSetBundle(joint, bundle.d_y, bundle.d_x, bundle.row_origin)


def analyze_pair(source: EnsembleSeries, target: EnsembleSeries,
                 spec_x: EmbeddingSpec, spec_y: EmbeddingSpec,
                 config: AnalysisConfig) -> TEResult:
    """Full pipeline for one directed channel pair in one window.

    TE is estimated on the original data for every assumed delay u in
    config.u_candidates; the delay u* maximizing TE (ties to the smallest u)
    is selected and reported with its TE value. Significance uses S surrogate
    targets built from permutations derived from config.seed. With
    scan_statistic="max" (default) the test statistic is the maximum TE over
    config.test_grid (all scanned delays when None), computed identically for
    the original and every surrogate, so the permutation test stays exact
    despite the scan. With "selected", surrogates are evaluated only at u*.
    Deterministic given config.seed.
    """
    validate_ensemble(source)
    validate_ensemble(target)

    if config.scan_statistic == "selected":
        grid = None  # decided after the scan: the selected delay only
    else:
        grid = config.test_grid or config.u_candidates

    te_curve = []
    bundles_by_u = {}
    for u in config.u_candidates:
        bundle = assemble_pointsets(source, target, spec_x, spec_y, u, config.window)
        te_u = estimate_te_batch([bundle], config.k, config.jitter_amplitude,
                                 [np.random.SeedSequence((config.seed, u, 0))])[0]
        te_curve.append((u, te_u))
        if grid is None or u in grid:
            bundles_by_u[u] = bundle

    u_best, te_best = max(te_curve, key=lambda ut: (ut[1], -ut[0]))
    if grid is None:
        grid = (u_best,)
        stat_orig = te_best
    else:
        stat_orig = max(te for u, te in te_curve if u in grid)

    s = config.n_surrogates
    perms = [draw_permutation(target.n_repetitions,
                              _surrogate_seed(config.seed, idx),
                              strict=config.strict_permutation)
             for idx in range(s)]
    window_width = config.window[1] - config.window[0] + 1
    stat_surr = np.full(s, -np.inf)
    for u in grid:
        bundle = bundles_by_u[u]
        surrogate_bundles = [_permuted_bundle(bundle, p.permutation, window_width)
                             for p in perms]
        seeds = [np.random.SeedSequence((config.seed, u, idx + 1))
                 for idx in range(s)]
        te_u = estimate_te_batch(surrogate_bundles, config.k,
                                 config.jitter_amplitude, seeds)
        np.maximum(stat_surr, te_u, out=stat_surr)

    te_value = te_best
    surrogates = stat_surr
    p = permutation_pvalue(stat_orig, surrogates, config.conservative_pvalue)
    significant = p < config.alpha
    return TEResult(
        source=source.channel_name,
        target=target.channel_name,
        window=config.window,
        u_selected=u_best,
        te_value=te_value,
        surrogate_values=surrogates,
        p_value=p,
        significant=significant,
        significant_corrected=significant,
        te_minus_median_surrogate=te_value - float(np.median(surrogates)),
        te_curve=te_curve,
    )


def scan_delays(source: EnsembleSeries, target: EnsembleSeries,
                spec_x: EmbeddingSpec, spec_y: EmbeddingSpec,
                config: AnalysisConfig) -> TEResult:
    """Delay-scanning analysis; identical to analyze_pair, which always scans."""
    return analyze_pair(source, target, spec_x, spec_y, config)


def analyze_pairs(series_by_name: dict, pairs, specs_by_name: dict,
                  config: AnalysisConfig):
    """Analyze several directed pairs and apply the configured family-wise
    correction across them, filling significant_corrected per result."""
    results = []
    for src_name, tgt_name in pairs:
        res = analyze_pair(series_by_name[src_name], series_by_name[tgt_name],
                           specs_by_name[src_name], specs_by_name[tgt_name], config)
        results.append(res)
    corrected = correct_multiple([r.p_value for r in results],
                                 config.alpha, config.correction)
    for res, dec in zip(results, corrected):
        res.significant_corrected = bool(dec and res.significant)
    return results

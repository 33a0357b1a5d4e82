"""Core data model: ensembles of repeated scalar time series and analysis configuration.

An ensemble holds R repetitions of a length-N scalar recording from one
channel. All estimation pools realizations across repetitions at fixed time,
so every repetition must have the same length and contain only finite values.

Time indices are 1-based in all documentation and file formats; array storage
is 0-based and error messages report 0-based (rep, t) locations.
"""

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import EmptyEnsemble, NonFiniteValue, RaggedRepetitions


@dataclass(frozen=True)
class EnsembleSeries:
    """One channel's samples indexed by (repetition, time).

    values has shape [R, N]; row r holds the time course of repetition r.
    sample_rate is metadata only, all algorithmic parameters are in samples.
    """

    channel_name: str
    values: np.ndarray
    sample_rate: float = 1000.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_repetitions(self) -> int:
        return 0 if self.values.ndim != 2 else self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return 0 if self.values.ndim != 2 else self.values.shape[1]


def ensemble_from_rows(name: str, rows: Sequence[Sequence[float]],
                       sample_rate: float = 1000.0) -> EnsembleSeries:
    """Build an EnsembleSeries from per-repetition rows, rejecting ragged input."""
    rows = list(rows)
    if len(rows) == 0:
        raise EmptyEnsemble("ensemble has zero repetitions")
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise RaggedRepetitions(f"repetition lengths differ: {sorted(lengths)}")
    series = EnsembleSeries(name, np.asarray(rows, dtype=np.float64), sample_rate)
    validate_ensemble(series)
    return series


def validate_ensemble(series: EnsembleSeries) -> None:
    """Check the ensemble invariants; raises on the first violation.

    Raises EmptyEnsemble for R == 0 or N == 0 and NonFiniteValue with the
    0-based (rep, t) location of the first NaN/Inf.
    """
    v = series.values
    if v.ndim != 2:
        raise RaggedRepetitions(f"values must be a 2-D matrix, got ndim={v.ndim}")
    if v.shape[0] == 0 or v.shape[1] == 0:
        raise EmptyEnsemble(f"empty ensemble, shape {v.shape}")
    finite = np.isfinite(v)
    if not finite.all():
        r, t = np.argwhere(~finite)[0]
        raise NonFiniteValue(int(r), int(t))


@dataclass(frozen=True)
class EmbeddingSpec:
    """Delay-embedding parameters: dimension dim and delay (lag spacing) in samples."""

    dim: int
    delay: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.delay < 1:
            raise ValueError(f"delay must be >= 1, got {self.delay}")

    @property
    def span(self) -> int:
        """Number of samples covered by one embedded vector."""
        return (self.dim - 1) * self.delay + 1


@dataclass(frozen=True)
class AnalysisConfig:
    """Settings for one TE analysis.

    window is the inclusive 1-based sample interval [t_lo, t_hi] over which
    embedded points are pooled (in addition to pooling over repetitions).
    u_candidates are the assumed source-target delays to scan, in samples.
    """

    u_candidates: tuple
    window: tuple
    k: int = 4
    n_surrogates: int = 500
    alpha: float = 0.05
    correction: str = "none"
    seed: int = 0
    jitter_amplitude: float = 1e-8
    strict_permutation: bool = True
    conservative_pvalue: bool = False  # use (count+1)/(S+1) instead of count/S
    # "max": test statistic is the maximum TE over test_grid, computed
    # identically for original and surrogate data, which keeps the test exact
    # under delay scanning. "selected": surrogates are evaluated only at the
    # delay picked on the original data; cheaper, but anti-conservative under
    # the null because the selected delay rides on upward noise.
    scan_statistic: str = "max"
    test_grid: tuple = None  # delays used by the "max" statistic; None = all

    def __post_init__(self):
        object.__setattr__(self, "u_candidates", tuple(int(u) for u in self.u_candidates))
        object.__setattr__(self, "window", (int(self.window[0]), int(self.window[1])))
        if len(self.u_candidates) == 0:
            raise ValueError("u_candidates must be nonempty")
        if list(self.u_candidates) != sorted(set(self.u_candidates)):
            raise ValueError("u_candidates must be strictly ascending")
        if any(u < 1 for u in self.u_candidates):
            raise ValueError("assumed delays must be >= 1 sample")
        if self.window[0] > self.window[1]:
            raise ValueError(f"window start {self.window[0]} exceeds end {self.window[1]}")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.n_surrogates < 1:
            raise ValueError("n_surrogates must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.correction not in ("none", "bonferroni", "fdr"):
            raise ValueError(f"unknown correction method {self.correction!r}")
        if self.jitter_amplitude < 0:
            raise ValueError("jitter_amplitude must be nonnegative")
        if self.scan_statistic not in ("max", "selected"):
            raise ValueError(f"unknown scan statistic {self.scan_statistic!r}")
        if self.test_grid is not None:
            grid = tuple(int(u) for u in self.test_grid)
            object.__setattr__(self, "test_grid", grid)
            if len(grid) == 0:
                raise ValueError("test_grid must be nonempty when given")
            if not set(grid) <= set(self.u_candidates):
                raise ValueError("test_grid must be a subset of u_candidates")
            if list(grid) != sorted(set(grid)):
                raise ValueError("test_grid must be strictly ascending")


@dataclass
class TEResult:
    """Outcome of one source->target analysis in one window.

    te_value is in nats. surrogate_values holds the S surrogate TE values at
    the selected delay. te_curve lists (u, te) pairs for every scanned delay.
    """

    source: str
    target: str
    window: tuple
    u_selected: int
    te_value: float
    surrogate_values: np.ndarray
    p_value: float
    significant: bool
    significant_corrected: bool
    te_minus_median_surrogate: float
    te_curve: list = field(default_factory=list)
    volume_conduction: bool = False

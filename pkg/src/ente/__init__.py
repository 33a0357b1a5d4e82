"""Ensemble transfer entropy estimation for non-stationary time series.

Estimates time-resolved transfer entropy from repeated recordings by pooling
realizations across repetitions, using a nearest-neighbor (KSG-style)
estimator with delay embedding, repetition-shuffle surrogate testing, and a
batched exact neighbor-search engine.
"""

from .data import (AnalysisConfig, EmbeddingSpec, EnsembleSeries, TEResult,
                   ensemble_from_rows, validate_ensemble)
from .embedding import (PointSetBundle, assemble_pointsets, embed_past_state,
                        optimize_embedding)
from .engine import (Chunk, NeighborCounts, batch_search, knn_kth_distances,
                     max_workers, radius_counts, set_workers)
from .inference import (SurrogateSpec, analyze_pair, analyze_pairs,
                        correct_multiple, draw_permutation, permutation_pvalue,
                        scan_delays, shuffle_target)
from .io_formats import (load_ensemble, read_results, save_ensemble,
                         write_results, write_te_curve_csv)
from .ksg import TermCounts, digamma, estimate_te, estimate_te_batch, te_from_counts
from .simulators import (ARParams, LorenzParams, ar_coupling_schedules,
                         simulate_ar_pair, simulate_lorenz_pair, table1_params)

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig", "ARParams", "Chunk", "EmbeddingSpec", "EnsembleSeries",
    "LorenzParams", "NeighborCounts", "PointSetBundle", "SurrogateSpec",
    "TEResult", "TermCounts", "analyze_pair", "analyze_pairs",
    "ar_coupling_schedules", "assemble_pointsets", "batch_search",
    "correct_multiple", "digamma", "draw_permutation", "embed_past_state",
    "ensemble_from_rows", "estimate_te", "estimate_te_batch",
    "knn_kth_distances", "load_ensemble", "max_workers",
    "optimize_embedding", "permutation_pvalue", "radius_counts",
    "read_results", "save_ensemble", "scan_delays", "set_workers",
    "shuffle_target", "simulate_ar_pair", "simulate_lorenz_pair",
    "table1_params", "te_from_counts", "validate_ensemble",
    "write_results", "write_te_curve_csv",
]

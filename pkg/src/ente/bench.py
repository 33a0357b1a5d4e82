"""Benchmark harness: batched neighbor search versus a sequential baseline.

Duplicates one randomly generated chunk a growing number of times and times
(a) one batched search over all chunks at full worker count and (b) a
strictly sequential one-chunk-at-a-time loop on a single worker. Correctness
gates performance: each timing row is accepted only after the two result
sets compare bit-identical.

Speedup factors quoted for other implementations (for example 22-50x for
GPU-vs-CPU comparisons) are bound to their specific hardware and are not
targets here; this harness reports the numbers for the machine it runs on.
"""

import platform
import time
from dataclasses import dataclass, field

import numpy as np

from .engine import Chunk, batch_search, max_workers, set_workers
from .exceptions import ResultMismatch


@dataclass
class BenchReport:
    chunk_points: int
    joint_dim: int
    marginal_dim: int
    k: int
    repeats: int
    hardware: str
    rows: list = field(default_factory=list)  # dicts with n_chunks / timings / speedup

    def to_csv(self) -> str:
        lines = ["n_chunks,seconds_parallel,seconds_sequential,speedup"]
        for row in self.rows:
            lines.append(f"{row['n_chunks']},{row['seconds_parallel']!r},"
                         f"{row['seconds_sequential']!r},{row['speedup']!r}")
        return "\n".join(lines) + "\n"


def _counts_equal(a, b) -> bool:
    if not np.array_equal(a.kth_distance, b.kth_distance):
        return False
    return all(np.array_equal(x, y) for x, y in zip(a.radius_counts, b.radius_counts))


def run_bench(chunk_points: int, joint_dim: int, marginal_dim: int, k: int,
              n_chunks_list, repeats: int = 3, seed: int = 0,
              workers: int | None = None) -> BenchReport:
    """Time batched vs sequential search for each chunk count in n_chunks_list."""
    if sorted(n_chunks_list) != list(n_chunks_list):
        raise ValueError("n_chunks_list must be ascending")
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((chunk_points, joint_dim))
    marginal_cols = [list(range(marginal_dim))]
    workers = workers or max_workers()

    report = BenchReport(chunk_points, joint_dim, marginal_dim, k, repeats,
                         f"{platform.machine()} {platform.processor() or 'cpu'} "
                         f"x{max_workers()} threads")

    for n_chunks in n_chunks_list:
        items = [(Chunk(points, chunk_id=i), marginal_cols) for i in range(n_chunks)]

        set_workers(workers)
        batch_search(items[:1], k)  # warm-up (JIT compile)
        par_times = []
        par_result = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            par_result = batch_search(items, k)
            par_times.append(time.perf_counter() - t0)

        set_workers(1)
        seq_times = []
        seq_result = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            seq_result = [batch_search([item], k)[0] for item in items]
            seq_times.append(time.perf_counter() - t0)
        set_workers(workers)

        for a, b in zip(par_result, seq_result):
            if isinstance(a, Exception) or isinstance(b, Exception) or not _counts_equal(a, b):
                raise ResultMismatch(f"parallel/sequential mismatch at n_chunks={n_chunks}")

        sec_par = float(np.median(par_times))
        sec_seq = float(np.median(seq_times))
        report.rows.append({
            "n_chunks": n_chunks,
            "seconds_parallel": sec_par,
            "seconds_sequential": sec_seq,
            "speedup": sec_seq / sec_par,
        })
    return report

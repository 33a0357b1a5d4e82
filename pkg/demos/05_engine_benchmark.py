"""Benchmark the batched neighbor-search engine.

Duplicates one random chunk a growing number of times and compares one
batched search against a strictly sequential one-chunk-at-a-time loop on a
single worker. Every timing row is accepted only after both result sets
compare bit-identical, so the speedup numbers are for provably identical
output. On a single-core machine the speedup hovers around 1x -- the point
of the harness is the shape of the curve on whatever hardware runs it.

Run:  python3 demos/05_engine_benchmark.py
"""

from ente.bench import run_bench
from ente.engine import max_workers

report = run_bench(chunk_points=4000, joint_dim=8, marginal_dim=4, k=4,
                   n_chunks_list=[1, 2, 4], repeats=3, seed=0)

print(f"hardware: {report.hardware} ({max_workers()} worker(s) available)")
print(report.to_csv(), end="")

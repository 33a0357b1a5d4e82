"""Choosing delay-embedding parameters by local prediction error.

The estimator needs an embedding (dimension, delay) for each channel. This
demo scans candidate embeddings for two signals with known structure -- an
AR(1) process (one past sample suffices) and a noisy sinusoid (needs two) --
and prints the cross-repetition local-predictor error table the choice is
based on.

Run:  python3 demos/03_embedding_optimization.py
"""

import numpy as np

from ente import EnsembleSeries, optimize_embedding


def show(name, series):
    spec, table = optimize_embedding(series, d_candidates=[1, 2, 3],
                                     tau_candidates=[1, 2], seed=0)
    print(f"{name}: selected dim={spec.dim}, delay={spec.delay}")
    for (d, tau), mse in sorted(table.items()):
        chosen = " <-" if (d, tau) == (spec.dim, spec.delay) else ""
        print(f"  dim={d} delay={tau}: prediction MSE {mse:.5f}{chosen}")
    print()


rng = np.random.default_rng(0)

# AR(1): x_t = 0.9 x_{t-1} + noise
n_rep, n = 20, 400
ar = np.zeros((n_rep, n))
for t in range(1, n):
    ar[:, t] = 0.9 * ar[:, t - 1] + 0.3 * rng.standard_normal(n_rep)
show("AR(1) process", EnsembleSeries("ar", ar))

# noisy sinusoid: one sample is ambiguous about the phase, two are not
phase = rng.uniform(0, 2 * np.pi, size=12)
t = np.arange(300)
sine = np.sin(2 * np.pi * t[None, :] / 40.0 + phase[:, None])
sine += 0.02 * rng.standard_normal(sine.shape)
show("noisy sinusoid", EnsembleSeries("sine", sine))

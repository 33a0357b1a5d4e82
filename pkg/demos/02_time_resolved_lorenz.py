"""Time-resolved coupling detection on delay-coupled Lorenz systems.

Two Lorenz systems, X driving Y with a 45-sample delay, but only while the
coupling is switched on (samples 1000-2000). Analyzing three windows --
before, during, and after -- shows TE localizing the interaction in time:
only the middle window comes out significant, and its delay estimate lands
near the true 45 samples.

This is a scaled-down run (a handful of repetitions and surrogates) so it
finishes in a couple of minutes on one core.

Run:  python3 demos/02_time_resolved_lorenz.py
"""

from ente import (AnalysisConfig, EmbeddingSpec, LorenzParams, analyze_pair,
                  simulate_lorenz_pair)

params = LorenzParams(
    delta_xy=45,
    n_repetitions=40,
    n_samples=3000,
    gamma_schedule=lambda t: 0.3 if 1000 <= t <= 2000 else 0.0,
    seed=0,
)
x, y = simulate_lorenz_pair(params)

spec_x = EmbeddingSpec(dim=1, delay=1)   # scalar source sample at t-u
spec_y = EmbeddingSpec(dim=2, delay=1)   # two past target samples

for label, window in (("before", (200, 400)),
                      ("during", (1600, 1800)),
                      ("after", (2750, 2950))):
    config = AnalysisConfig(
        u_candidates=tuple(range(35, 56, 2)),
        window=window,
        k=4,
        n_surrogates=50,
        alpha=0.05,
        seed=0,
        test_grid=(35, 45, 55),
    )
    result = analyze_pair(x, y, spec_x, spec_y, config)
    verdict = "SIGNIFICANT" if result.significant else "not significant"
    print(f"window {window} ({label:6s}): TE = {result.te_value:+.4f} nats "
          f"at u = {result.u_selected}, p = {result.p_value:.3f} -> {verdict}")

print("\nExpected: only the 'during' window significant, delay near 45.")

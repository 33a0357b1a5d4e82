"""Delay scanning on a coupled AR(1) pair.

Simulates the unidirectional scenario (X drives Y with a 10-sample delay,
coupling switching on around sample 1000), scans assumed delays in a late
window where the coupling is fully established, and prints the TE curve with
the surrogate-based significance verdict.

Run:  python3 demos/01_delay_scan_ar.py
"""

from ente import (AnalysisConfig, EmbeddingSpec, analyze_pair,
                  simulate_ar_pair, table1_params)

x, y = simulate_ar_pair(table1_params("unidirectional", n_repetitions=30,
                                      n_samples=1600, seed=0))

config = AnalysisConfig(
    u_candidates=tuple(range(1, 21)),
    window=(1201, 1500),     # coupling fully on (inflection at sample 1000)
    k=4,
    n_surrogates=50,
    alpha=0.05,
    seed=0,
    test_grid=(1, 5, 10, 15, 20),  # delays entering the max test statistic
)
spec = EmbeddingSpec(dim=1, delay=1)  # AR(1): one past sample suffices

result = analyze_pair(x, y, spec, spec, config)

print("TE(u) curve [nats]:")
for u, te in result.te_curve:
    bar = "#" * max(0, int(te * 400))
    marker = " <- selected" if u == result.u_selected else ""
    print(f"  u={u:2d}  {te:+.4f}  {bar}{marker}")

print(f"\nreconstructed delay: {result.u_selected} samples (true: 10)")
print(f"TE = {result.te_value:.4f} nats, p = {result.p_value:.3f} "
      f"({'significant' if result.significant else 'not significant'} "
      f"at alpha={config.alpha})")

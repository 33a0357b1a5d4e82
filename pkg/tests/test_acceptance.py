"""End-to-end acceptance criteria.

Each test prints one PASS/FAIL line with the measured values. The full
suite is statistical and single-threaded numerics heavy; expect a multi-hour
wall time on one core.
"""

import sys
import time

import numpy as np
import pytest
from scipy import stats

from ente.bench import run_bench
from ente.data import AnalysisConfig, EmbeddingSpec, EnsembleSeries
from ente.embedding import PointSetBundle, assemble_pointsets
from ente.engine import Chunk, batch_search, max_workers, set_workers
from ente.inference import analyze_pair
from ente.io_formats import write_results
from ente.ksg import estimate_te
from ente.simulators import (LorenzParams, simulate_ar_pair,
                             simulate_lorenz_pair, table1_params)

LORENZ_SX = EmbeddingSpec(1, 1)
LORENZ_SY = EmbeddingSpec(2, 1)
AR_SPEC = EmbeddingSpec(1, 1)


_CAPSYS = None


@pytest.fixture(autouse=True)
def _capture_bypass(capsys):
    """Let _emit bypass pytest's output capture inside these tests."""
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def _emit(line: str) -> None:
    # the criterion verdicts must reach the real stdout even under capture
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)


def _report(criterion: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE CRITERION {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    _emit(line)
    assert ok, line


def _skip(criterion: int, detail: str) -> None:
    line = f"ACCEPTANCE CRITERION {criterion}: SKIP - {detail}"
    _emit(line)
    pytest.skip(line)


def _lorenz_pair(seed: int, n_repetitions=50, n_samples=3000,
                 gamma=0.3, on=(1000, 2000), delta=45):
    params = LorenzParams(
        delta_xy=delta, n_repetitions=n_repetitions, n_samples=n_samples,
        gamma_schedule=lambda t: gamma if on[0] <= t <= on[1] else 0.0,
        seed=seed)
    return simulate_lorenz_pair(params)


def test_criterion_1_lorenz_reproduction():
    t_start = time.perf_counter()
    windows = [(200, 450), (1600, 1850), (2750, 3000)]
    seed_ok = []
    details = []
    for seed in range(5):
        x, y = _lorenz_pair(seed)
        sig, delays = [], []
        for window in windows:
            cfg = AnalysisConfig(u_candidates=tuple(range(35, 56, 2)),
                                 window=window, k=4, n_surrogates=200,
                                 alpha=0.05, seed=seed, test_grid=(35, 45, 55))
            res = analyze_pair(x, y, LORENZ_SX, LORENZ_SY, cfg)
            sig.append(res.significant)
            delays.append(res.u_selected)
        ok = (sig == [False, True, False]) and abs(delays[1] - 45) <= 4.5
        seed_ok.append(ok)
        details.append(f"seed {seed}: sig={sig} delay={delays[1]}")
    minutes = (time.perf_counter() - t_start) / 60.0
    n_pass = sum(seed_ok)
    _report(1, n_pass >= 4,
            f"{n_pass}/5 seeds reproduce coupled-window-only significance "
            f"with delay within 45+/-4.5 ({'; '.join(details)}); "
            f"runtime {minutes:.1f} min on {max_workers()} thread(s) "
            f"(30-min target assumes 8 threads)")


def test_criterion_2_ar_unidirectional():
    x, y = simulate_ar_pair(table1_params("unidirectional", 50, 3000, seed=0))
    windows = [(201, 500), (501, 800), (801, 1100), (1101, 1400)]
    results = {}
    for wi, window in enumerate(windows, start=1):
        for direction, (src, tgt) in (("XY", (x, y)), ("YX", (y, x))):
            cfg = AnalysisConfig(u_candidates=tuple(range(1, 21)),
                                 window=window, k=4, n_surrogates=100,
                                 alpha=0.05, seed=0, test_grid=(1, 5, 10, 15, 20))
            results[(direction, wi)] = analyze_pair(src, tgt, AR_SPEC, AR_SPEC, cfg)

    xy_sig = [results[("XY", wi)].significant for wi in range(1, 5)]
    delay4 = results[("XY", 4)].u_selected
    yx_sig_count = sum(results[("YX", wi)].significant for wi in range(1, 5))
    ok = (xy_sig == [False, False, True, True]
          and abs(delay4 - 10) <= 3 and yx_sig_count <= 1)
    _report(2, ok,
            f"X->Y significance per window {xy_sig} (want [F,F,T,T]), "
            f"window-4 delay {delay4} (want 10+/-3), "
            f"Y->X significant in {yx_sig_count} window(s) (want <=1)")


def test_criterion_3_ar_bidirectional():
    x, y = simulate_ar_pair(table1_params("bidirectional", 50, 3000, seed=0))
    windows = [(201 + 300 * i, 500 + 300 * i) for i in range(8)]
    results = {}
    for wi, window in enumerate(windows, start=1):
        for direction, (src, tgt) in (("XY", (x, y)), ("YX", (y, x))):
            cfg = AnalysisConfig(u_candidates=tuple(range(1, 31)),
                                 window=window, k=4, n_surrogates=100,
                                 alpha=0.05, seed=0, test_grid=(2, 10, 20, 28))
            results[(direction, wi)] = analyze_pair(src, tgt, AR_SPEC, AR_SPEC, cfg)

    xy_sig = [results[("XY", wi)].significant for wi in range(1, 9)]
    yx_sig = [results[("YX", wi)].significant for wi in range(1, 9)]
    xy_delays = [results[("XY", wi)].u_selected for wi in (6, 7, 8)]
    yx_delays = [results[("YX", wi)].u_selected for wi in (7, 8)]
    # window 6 ends at the Y->X inflection sample, so the backward coupling
    # already ramps inside it; only windows 1-5 are treated as true nulls
    ok = (xy_sig[:3] == [False] * 3 and all(xy_sig[3:])
          and all(abs(d - 10) <= 2 for d in xy_delays)
          and yx_sig[6] and yx_sig[7]
          and sum(yx_sig[:5]) <= 1
          and all(abs(d - 20) <= 2 for d in yx_delays))
    _report(3, ok,
            f"X->Y sig {xy_sig} (want onset at window 4), "
            f"X->Y delays w6-8 {xy_delays} (want 10+/-2), "
            f"Y->X sig {yx_sig} (want windows 7-8, <=1 in null windows 1-5), "
            f"Y->X delays w7-8 {yx_delays} (want 20+/-2)")


def test_criterion_4_robustness_curve():
    x, y = _lorenz_pair(0, n_repetitions=300, n_samples=300,
                        gamma=0.3, on=(1, 300))
    u_grid = range(30, 61)
    m_values = [500, 2000, 5000, 10000, 30000]
    errors = {}
    for m in m_values:
        curve = []
        for u in u_grid:
            bundle = assemble_pointsets(x, y, LORENZ_SX, LORENZ_SY, u, (161, 260))
            sub = PointSetBundle(bundle.joint[:m], bundle.d_y, bundle.d_x,
                                 bundle.row_origin[:m])
            te = estimate_te(sub, k=4, jitter_amplitude=1e-8,
                             seed=np.random.SeedSequence((0, u, m)))
            curve.append((u, te))
        u_best = max(curve, key=lambda ut: (ut[1], -ut[0]))[0]
        errors[m] = abs(u_best - 45)
    ok = (errors[10000] <= 1.125 and errors[30000] <= 1.125
          and errors[500] > errors[30000])
    _report(4, ok,
            f"|delay error| per point count {errors} "
            f"(want <=1.125 at 10000 and 30000, and error(500) > error(30000))")


def test_criterion_5_gaussian_analytic_oracle():
    analytic = 0.5 * np.log(1.25)  # residual-variance ratio, in nats
    m = 10_000
    estimates = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(m + 1)
        eta = rng.standard_normal(m + 1)
        y = np.empty(m + 1)
        y[0] = eta[0]
        y[1:] = 0.5 * x[:-1] + eta[1:]
        bundle = assemble_pointsets(EnsembleSeries("X", x[None, :]),
                                    EnsembleSeries("Y", y[None, :]),
                                    EmbeddingSpec(1, 1), EmbeddingSpec(1, 1),
                                    1, (2, m + 1))
        estimates.append(estimate_te(bundle, k=4, jitter_amplitude=1e-8,
                                     seed=np.random.SeedSequence(seed)))
    mean = float(np.mean(estimates))
    ok = abs(mean - analytic) <= 0.02
    _report(5, ok,
            f"mean KSG TE {mean:.4f} nats over 10 seeds vs analytic "
            f"{analytic:.4f} (tolerance 0.02)")


def _oracle_counts(points, marginal_cols, k):
    diffs = np.abs(points[:, None, :] - points[None, :, :])
    dist = diffs.max(axis=2)
    np.fill_diagonal(dist, np.inf)
    eps = np.sort(dist, axis=1)[:, k - 1]
    counts = []
    for cols in marginal_cols:
        sub = points[:, cols]
        d = np.abs(sub[:, None, :] - sub[None, :, :]).max(axis=2)
        np.fill_diagonal(d, np.inf)
        counts.append((d < eps[:, None]).sum(axis=1))
    return eps, counts


def test_criterion_6_engine_oracle_equivalence():
    rng = np.random.default_rng(2024)
    chunks = []
    for _ in range(100):
        n = int(rng.integers(10, 501))
        dim = int(rng.integers(1, 11))
        pts = rng.standard_normal((n, dim))
        if rng.random() < 0.3:
            pts = np.round(pts, 1)  # exercise exact ties
        n_marg = int(rng.integers(1, 4))
        margs = [sorted(rng.choice(dim, size=int(rng.integers(1, dim + 1)),
                                   replace=False).tolist())
                 for _ in range(n_marg)]
        chunks.append((pts, margs))

    k = 4
    mism = 0
    workers_used = []
    for workers in (1, 4, 16):
        effective = set_workers(workers)
        workers_used.append(effective)
        results = batch_search([(Chunk(p), m) for p, m in chunks], k)
        for (pts, margs), res in zip(chunks, results):
            eps, counts = _oracle_counts(pts, margs, k)
            if not np.array_equal(res.kth_distance, eps):
                mism += 1
                continue
            if any(not np.array_equal(a, b)
                   for a, b in zip(res.radius_counts, counts)):
                mism += 1
    set_workers(max_workers())
    ok = mism == 0
    _report(6, ok,
            f"{mism} mismatches over 100 random chunks x worker counts "
            f"{workers_used} (requested 1/4/16, clamped to available "
            f"{max_workers()} thread(s)); bit-identical to O(n^2) oracle")


def test_criterion_7_determinism_and_invariance(tmp_path):
    rng = np.random.default_rng(0)
    x = EnsembleSeries("X", rng.standard_normal((15, 400)))
    yv = rng.standard_normal((15, 400)) * 0.5
    yv[:, 4:] += 0.6 * x.values[:, :-4]
    y = EnsembleSeries("Y", yv)
    cfg = AnalysisConfig(u_candidates=(2, 3, 4, 5, 6), window=(100, 380),
                         k=4, n_surrogates=25, alpha=0.05, seed=0)

    # (a) worker count never changes the serialized result
    set_workers(1)
    res1 = analyze_pair(x, y, AR_SPEC, AR_SPEC, cfg)
    set_workers(max_workers())
    res2 = analyze_pair(x, y, AR_SPEC, AR_SPEC, cfg)
    p1, p2 = tmp_path / "w1.json", tmp_path / "wmax.json"
    write_results([res1], p1, cfg, timestamp=False)
    write_results([res2], p2, cfg, timestamp=False)
    a_ok = p1.read_bytes() == p2.read_bytes()

    # (b) positive affine transform of both channels leaves TE unchanged
    cfg_nj = AnalysisConfig(u_candidates=(4,), window=(100, 380), k=4,
                            n_surrogates=5, alpha=0.05, seed=0,
                            jitter_amplitude=0.0)
    base = analyze_pair(x, y, AR_SPEC, AR_SPEC, cfg_nj)
    x_t = EnsembleSeries("X", 2.5 * x.values - 3.0)
    y_t = EnsembleSeries("Y", 2.5 * y.values - 3.0)
    trans = analyze_pair(x_t, y_t, AR_SPEC, AR_SPEC, cfg_nj)
    b_ok = trans.te_value == base.te_value

    # (c) joint repetition relabeling leaves TE unchanged
    order = np.random.default_rng(1).permutation(15)
    rel = analyze_pair(EnsembleSeries("X", x.values[order]),
                       EnsembleSeries("Y", y.values[order]),
                       AR_SPEC, AR_SPEC, cfg_nj)
    c_ok = rel.te_value == base.te_value

    # (d) the identity permutation reproduces the original TE
    from ente.inference import SurrogateSpec, shuffle_target
    same = shuffle_target(y, SurrogateSpec(np.arange(15)))
    ident = analyze_pair(x, same, AR_SPEC, AR_SPEC, cfg_nj)
    d_ok = ident.te_value == base.te_value

    # (e) null p-values approximately uniform over 100 seeded runs
    pvals = []
    for seed in range(100):
        r = np.random.default_rng((7, seed))
        xs = EnsembleSeries("X", r.standard_normal((20, 200)))
        ys = EnsembleSeries("Y", r.standard_normal((20, 200)))
        c = AnalysisConfig(u_candidates=(3,), window=(50, 190), k=4,
                           n_surrogates=29, alpha=0.05, seed=seed)
        pvals.append(analyze_pair(xs, ys, AR_SPEC, AR_SPEC, c).p_value)
    ks = stats.kstest(pvals, "uniform").statistic
    e_ok = ks < 0.2

    ok = a_ok and b_ok and c_ok and d_ok and e_ok
    _report(7, ok,
            f"threads-invariant bytes={a_ok}, affine-invariant={b_ok}, "
            f"relabeling-invariant={c_ok}, identity-surrogate={d_ok}, "
            f"null KS={ks:.3f} (<0.2: {e_ok})")


def test_criterion_8_parallel_speedup():
    if max_workers() < 8:
        _skip(8, f"requires >= 8 hardware threads, only {max_workers()} "
                 f"available in this environment; speedup target not "
                 f"measurable honestly on this machine")
    report = run_bench(chunk_points=30094, joint_dim=17, marginal_dim=8, k=4,
                       n_chunks_list=[64], repeats=3, seed=0)
    speedup = report.rows[0]["speedup"]
    _report(8, speedup >= 3.0,
            f"batched vs sequential speedup {speedup:.2f}x on "
            f"{max_workers()} threads (want >= 3x)")

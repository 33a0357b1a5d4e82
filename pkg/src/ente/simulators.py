"""Simulators for the evaluation systems: delay-coupled Lorenz pairs and
AR(1) pairs with tanh-modulated time-varying coupling.

Both simulators generate independent repetitions (per-repetition RNG streams
derived from (seed, r)) and are fully deterministic for a fixed seed.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numba import njit

from .data import EnsembleSeries
from .exceptions import IntegrationDiverged, UnstableParameters

# ---------------------------------------------------------------------------
# Coupled Lorenz systems
# ---------------------------------------------------------------------------


@dataclass
class LorenzParams:
    """Two unidirectionally coupled Lorenz systems, X driving Y.

    The coupling adds gamma(t) * V_X(t - delta)^2 to Y's V-equation, where
    delta is delta_xy samples and gamma_schedule maps a 1-based recorded
    sample index to the coupling strength (evaluated as 0 before recording
    starts). One recorded sample spans sample_spacing Lorenz time units,
    integrated at fixed step integration_dt.
    """

    delta_xy: int
    n_repetitions: int
    n_samples: int
    gamma_schedule: Callable[[int], float] = lambda t: 0.0
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    integration_dt: float = 0.01
    sample_spacing: float = 0.01
    burn_in_steps: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.delta_xy < 1:
            raise ValueError("delta_xy must be >= 1 sample")
        if self.n_repetitions < 1 or self.n_samples < 1:
            raise ValueError("need positive repetition and sample counts")
        ratio = self.sample_spacing / self.integration_dt
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError("sample_spacing must be an integer multiple of integration_dt")


@njit(cache=True)
def _rk4_lorenz(u0, v0, w0, nsteps, dt, sigma, rho, beta, forcing):
    # forcing holds the coupling drive at step boundaries (length nsteps+1);
    # half-step values are linearly interpolated.
    v_traj = np.empty(nsteps + 1)
    u, v, w = u0, v0, w0
    v_traj[0] = v
    for s in range(nsteps):
        f0 = forcing[s]
        f1 = forcing[s + 1]
        fh = 0.5 * (f0 + f1)

        du1 = sigma * (v - u)
        dv1 = u * (rho - w) - v + f0
        dw1 = u * v - beta * w

        u2 = u + 0.5 * dt * du1
        v2 = v + 0.5 * dt * dv1
        w2 = w + 0.5 * dt * dw1
        du2 = sigma * (v2 - u2)
        dv2 = u2 * (rho - w2) - v2 + fh
        dw2 = u2 * v2 - beta * w2

        u3 = u + 0.5 * dt * du2
        v3 = v + 0.5 * dt * dv2
        w3 = w + 0.5 * dt * dw2
        du3 = sigma * (v3 - u3)
        dv3 = u3 * (rho - w3) - v3 + fh
        dw3 = u3 * v3 - beta * w3

        u4 = u + dt * du3
        v4 = v + dt * dv3
        w4 = w + dt * dw3
        du4 = sigma * (v4 - u4)
        dv4 = u4 * (rho - w4) - v4 + f1
        dw4 = u4 * v4 - beta * w4

        u += dt * (du1 + 2 * du2 + 2 * du3 + du4) / 6.0
        v += dt * (dv1 + 2 * dv2 + 2 * dv3 + dv4) / 6.0
        w += dt * (dw1 + 2 * dw2 + 2 * dw3 + dw4) / 6.0
        v_traj[s + 1] = v
    return v_traj


def simulate_lorenz_pair(params: LorenzParams):
    """Integrate the coupled pair; returns (V_X, V_Y) as EnsembleSeries."""
    steps_per_sample = round(params.sample_spacing / params.integration_dt)
    burn = params.burn_in_steps
    nsteps = burn + params.n_samples * steps_per_sample
    delay_steps = params.delta_xy * steps_per_sample
    dt = params.integration_dt

    # schedule evaluated on the recorded-sample grid, held between samples
    gamma = np.zeros(nsteps + 1)
    for s in range(nsteps + 1):
        t_idx = int(math.floor((s - burn) / steps_per_sample))
        gamma[s] = params.gamma_schedule(t_idx) if t_idx >= 1 else 0.0

    sample_rate = 1000.0  # documentation convention: 1 sample = 1 ms
    vx = np.empty((params.n_repetitions, params.n_samples))
    vy = np.empty((params.n_repetitions, params.n_samples))
    no_forcing = np.zeros(nsteps + 1)
    rec = burn + steps_per_sample * np.arange(1, params.n_samples + 1)

    for r in range(params.n_repetitions):
        rng_x = np.random.default_rng(np.random.SeedSequence((params.seed, r, 0)))
        rng_y = np.random.default_rng(np.random.SeedSequence((params.seed, r, 1)))
        x0 = (rng_x.uniform(-15, 15), rng_x.uniform(-20, 20), rng_x.uniform(10, 40))
        y0 = (rng_y.uniform(-15, 15), rng_y.uniform(-20, 20), rng_y.uniform(10, 40))
        vx_traj = _rk4_lorenz(x0[0], x0[1], x0[2], nsteps, dt,
                              params.sigma, params.rho, params.beta, no_forcing)
        forcing = np.zeros(nsteps + 1)
        if delay_steps < nsteps + 1:
            forcing[delay_steps:] = gamma[delay_steps:] * vx_traj[:nsteps + 1 - delay_steps] ** 2
        vy_traj = _rk4_lorenz(y0[0], y0[1], y0[2], nsteps, dt,
                              params.sigma, params.rho, params.beta, forcing)
        if not (np.isfinite(vx_traj).all() and np.isfinite(vy_traj).all()):
            raise IntegrationDiverged(f"non-finite state in repetition {r}")
        vx[r] = vx_traj[rec]
        vy[r] = vy_traj[rec]

    return (EnsembleSeries("X", vx, sample_rate),
            EnsembleSeries("Y", vy, sample_rate))


# ---------------------------------------------------------------------------
# Coupled AR(1) processes
# ---------------------------------------------------------------------------

SCENARIOS = ("unidirectional", "two_step", "bidirectional")


@dataclass
class ARParams:
    """Two coupled AR(1) processes with time-varying coupling strength.

    Couplings ramp up smoothly: a scaled tanh with the given slope and
    inflection sample indices (first inflection drives the X->Y coupling,
    second drives Y->X in the bidirectional scenario and the second step of
    the two-step scenario).
    """

    alpha_x: float
    alpha_y: float
    beta_yx: float
    beta_xy: float
    delta_yx: int
    delta_xy: int
    scenario: str
    n_repetitions: int
    n_samples: int
    slope: float = 0.05
    inflections: tuple = (1000, 2000)
    burn_in: int = 500
    noise_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}")
        if abs(self.alpha_x) >= 1 or abs(self.alpha_y) >= 1:
            raise UnstableParameters("|alpha| must be < 1")
        if self.delta_xy < 1 or (self.scenario == "bidirectional" and self.delta_yx < 1):
            raise ValueError("coupling delays must be >= 1 sample")


def ar_coupling_schedules(params: ARParams, t: np.ndarray):
    """Coupling strengths (gamma_yx(t), gamma_xy(t)) on sample indices t."""
    t = np.asarray(t, dtype=np.float64)
    i_xy, i_yx = params.inflections
    step = lambda t0: 0.5 * (1.0 + np.tanh(params.slope * (t - t0)))
    if params.scenario == "unidirectional":
        g_xy = params.beta_xy * step(i_xy)
        g_yx = np.zeros_like(t)
    elif params.scenario == "two_step":
        g_xy = params.beta_xy * 0.5 * (step(i_xy) + step(i_yx))
        g_yx = np.zeros_like(t)
    else:  # bidirectional
        g_xy = params.beta_xy * step(i_xy)
        g_yx = params.beta_yx * step(i_yx)
    return g_yx, g_xy


def simulate_ar_pair(params: ARParams):
    """Iterate the coupled AR(1) recursion; returns (X, Y) as EnsembleSeries."""
    burn = params.burn_in
    total = burn + params.n_samples
    reps = params.n_repetitions
    # sample index of step s is s - burn + 1 (recorded samples are 1..N)
    t_axis = np.arange(total) - burn + 1
    g_yx, g_xy = ar_coupling_schedules(params, t_axis)

    noise_x = np.empty((reps, total))
    noise_y = np.empty((reps, total))
    for r in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence((params.seed, r)))
        noise_x[r] = rng.standard_normal(total) * params.noise_scale
        noise_y[r] = rng.standard_normal(total) * params.noise_scale

    x = np.zeros((reps, total))
    y = np.zeros((reps, total))
    d_yx, d_xy = params.delta_yx, params.delta_xy
    for s in range(total):
        x_prev = x[:, s - 1] if s >= 1 else 0.0
        y_prev = y[:, s - 1] if s >= 1 else 0.0
        y_del = y[:, s - d_yx] if s >= d_yx and d_yx >= 1 else 0.0
        x_del = x[:, s - d_xy] if s >= d_xy else 0.0
        x[:, s] = params.alpha_x * x_prev + g_yx[s] * y_del + noise_x[:, s]
        y[:, s] = params.alpha_y * y_prev + g_xy[s] * x_del + noise_y[:, s]

    if not (np.isfinite(x).all() and np.isfinite(y).all()) or \
            max(np.abs(x).max(), np.abs(y).max()) > 1e9:
        raise UnstableParameters("AR iteration diverged")

    return (EnsembleSeries("X", x[:, burn:], 1000.0),
            EnsembleSeries("Y", y[:, burn:], 1000.0))


def table1_params(scenario: str, n_repetitions: int, n_samples: int,
                  seed: int = 0) -> ARParams:
    """Published parameter rows for the three simulated coupling scenarios."""
    rows = {
        "unidirectional": (0.75, 0.35, 0.0, -0.35, 0, 10),
        "two_step": (0.75, 0.35, 0.0, -0.35, 0, 10),
        "bidirectional": (0.475, 0.35, -0.4, -0.35, 20, 10),
    }
    a_x, a_y, b_yx, b_xy, d_yx, d_xy = rows[scenario]
    return ARParams(alpha_x=a_x, alpha_y=a_y, beta_yx=b_yx, beta_xy=b_xy,
                    delta_yx=max(d_yx, 1), delta_xy=d_xy, scenario=scenario,
                    n_repetitions=n_repetitions, n_samples=n_samples, seed=seed)

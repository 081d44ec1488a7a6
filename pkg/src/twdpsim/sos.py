"""Sum-of-sinusoids generation of TWDP fading traces.

Each trial draws fresh random initial phases for the two specular tones and a
fresh diffuse realization: N sinusoids whose arrival angles are regular with a
random per-path offset, ``beta_i = (2*pi*i + theta_i)/N``.  The normalized
lowpass process is

    z(t) = (v1*exp(j*(phi1 + rate1*t)) + v2*exp(j*(phi2 + rate2*t)) + n(t)) / sqrt(omega)

with n(t) = sqrt(diffuse_power/N) * sum_i exp(j*(2*pi*f_D*t*cos(beta_i) + phase_i)).

Randomness comes from one Philox substream per (seed, trial_index), so every
trial is reproducible in isolation and ensembles are independent of execution
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .params import TWO_PI, ValidatedScenario


@dataclass(frozen=True, eq=False)
class DiffuseRealization:
    """Random angles of one diffuse-component draw.

    aoas[i] = wrap((2*pi*(i+1) + thetas[i]) / n_sinusoids), all angles stored
    in [-pi, pi).
    """

    n_sinusoids: int
    thetas: np.ndarray
    init_phases: np.ndarray
    aoas: np.ndarray


@dataclass(frozen=True, eq=False)
class FadingTrace:
    """One trial's complex lowpass sample sequence plus provenance."""

    samples: np.ndarray
    sample_period_s: float
    scenario_digest: str
    trial_index: int
    seed: int
    scenario: ValidatedScenario


@dataclass(frozen=True, eq=False)
class TraceEnsemble:
    """M trials of one scenario, trial indices 0..M-1 in order."""

    traces: tuple[FadingTrace, ...]
    scenario: ValidatedScenario

    @cached_property
    def sample_matrix(self) -> np.ndarray:
        """Samples stacked as an (n_trials, n_samples) complex array."""
        return np.vstack([tr.samples for tr in self.traces])

    @property
    def n_trials(self) -> int:
        return len(self.traces)


def _wrap(angles: np.ndarray) -> np.ndarray:
    return (angles + np.pi) % TWO_PI - np.pi


def draw_trial_randoms(
    seed: int, trial_index: int, n_sinusoids: int
) -> tuple[float, float, DiffuseRealization]:
    """Draw all random angles for one trial from its keyed substream.

    Returns the two specular initial phases and the diffuse realization.  The
    2N+2 angles are i.i.d. uniform on [-pi, pi); identical (seed, trial_index,
    n_sinusoids) always produce identical output.
    """
    key = np.array([seed, trial_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    phi1, phi2 = rng.uniform(-np.pi, np.pi, size=2)
    thetas = rng.uniform(-np.pi, np.pi, size=n_sinusoids)
    init_phases = rng.uniform(-np.pi, np.pi, size=n_sinusoids)
    i = np.arange(1, n_sinusoids + 1)
    aoas = _wrap((TWO_PI * i + thetas) / n_sinusoids)
    return phi1, phi2, DiffuseRealization(n_sinusoids, thetas, init_phases, aoas)


def specular_tone(
    amplitude: float, init_phase: float, phase_rate: float, t_grid: np.ndarray
) -> np.ndarray:
    """Constant-envelope tone amplitude*exp(j*(init_phase + phase_rate*t))."""
    return amplitude * np.exp(1j * (init_phase + phase_rate * np.asarray(t_grid)))


def diffuse_sample(
    realization: DiffuseRealization,
    diffuse_power: float,
    doppler_hz: float,
    t,
) -> complex | np.ndarray:
    """Evaluate the N-sinusoid diffuse component at time(s) ``t``.

    Returns sqrt(diffuse_power/N) * sum_i exp(j*(2*pi*f_D*t*cos(aoas[i]) + phase_i));
    a scalar for scalar ``t``, else an array matching ``t``.
    """
    n = realization.n_sinusoids
    t_arr = np.asarray(t, dtype=float)
    arg = (
        TWO_PI * doppler_hz * np.multiply.outer(t_arr, np.cos(realization.aoas))
        + realization.init_phases
    )
    total = math.sqrt(diffuse_power / n) * np.exp(1j * arg).sum(axis=-1)
    return complex(total) if t_arr.ndim == 0 else total


def generate_trace(scenario: ValidatedScenario, trial_index: int) -> FadingTrace:
    """Generate one trial's normalized fading trace deterministically."""
    t = np.arange(scenario.n_samples) * scenario.sample_period_s
    phi1, phi2, real = draw_trial_randoms(
        scenario.seed, trial_index, scenario.n_sinusoids
    )
    z = (
        specular_tone(scenario.params.v1, phi1, scenario.spec1.phase_rate, t)
        + specular_tone(scenario.params.v2, phi2, scenario.spec2.phase_rate, t)
        + diffuse_sample(real, scenario.params.diffuse_power, scenario.doppler_hz, t)
    ) / math.sqrt(scenario.params.omega)
    return FadingTrace(
        samples=z,
        sample_period_s=scenario.sample_period_s,
        scenario_digest=scenario.digest(),
        trial_index=trial_index,
        seed=scenario.seed,
        scenario=scenario,
    )


def generate_ensemble(scenario: ValidatedScenario) -> TraceEnsemble:
    """Generate all n_trials traces, assembled in trial-index order."""
    traces = tuple(
        generate_trace(scenario, idx) for idx in range(scenario.n_trials)
    )
    return TraceEnsemble(traces=traces, scenario=scenario)


def envelope_bound(scenario: ValidatedScenario) -> float:
    """Exact triangle-inequality bound on |z| for this scenario."""
    p = scenario.params
    return (
        p.v1 + p.v2 + math.sqrt(p.diffuse_power * scenario.n_sinusoids)
    ) / math.sqrt(p.omega)

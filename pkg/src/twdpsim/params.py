"""TWDP channel parameterization, scenario configuration, and validation.

A two-wave-with-diffuse-power (TWDP) channel carries two constant-amplitude
specular tones plus a diffuse scattered component.  Three linear quantities
describe the power budget: the tone amplitudes ``v1 >= v2`` and the diffuse
power ``2*sigma**2``, with total power ``omega = v1**2 + v2**2 + diffuse``.
The common shape parameters are

    k     = (v1**2 + v2**2) / diffuse_power     specular-to-diffuse power ratio
    gamma = v2 / v1                             tone amplitude ratio in [0, 1]

Rayleigh fading is k=0 and Rician fading is gamma=0.  Each tone arrives from
angle ``aoa`` relative to the receiver track and accumulates phase at the
constant rate ``-2*pi*f_D*cos(aoa)`` over the local stationarity interval.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass, replace

TWO_PI = 2.0 * math.pi

# Common experiment defaults: 8 sinusoids, 500 trials, f_D*T_s = 0.01 at 1 kHz
# Doppler, unit total power, tone arrivals at pi/4 and 2*pi/3.
DEFAULT_N_SINUSOIDS = 8
DEFAULT_N_TRIALS = 500
DEFAULT_FD_TS = 0.01
DEFAULT_DOPPLER_HZ = 1000.0
DEFAULT_OMEGA = 1.0
DEFAULT_AOA1 = math.pi / 4
DEFAULT_AOA2 = 2 * math.pi / 3
DEFAULT_N_SAMPLES = 2001

# Relative tolerance for the power-sum identity omega = v1^2 + v2^2 + diffuse.
_OMEGA_RTOL = 1e-12


class ParameterError(ValueError):
    """Raised for physically inconsistent channel parameters."""


class InvalidScenarioError(ValueError):
    """Raised by validate_scenario; carries the complete list of violations."""

    def __init__(self, errors: list[str]):
        super().__init__("invalid scenario: " + "; ".join(errors))
        self.errors = list(errors)


def wrap_angle(angle: float) -> float:
    """Reduce an angle to the interval [-pi, pi)."""
    return (angle + math.pi) % TWO_PI - math.pi


def phase_rate(aoa: float, doppler_hz: float) -> float:
    """Phase velocity -2*pi*f_D*cos(aoa) of a tone arriving from ``aoa``.

    ``doppler_hz`` is the maximum Doppler frequency f_D = v/lambda and must be
    positive.
    """
    if not doppler_hz > 0:
        raise ParameterError(f"doppler_hz must be > 0, got {doppler_hz}")
    return -TWO_PI * doppler_hz * math.cos(aoa)


@dataclass(frozen=True)
class ChannelParams:
    """Linear TWDP power parameters.

    Invariants enforced at construction: non-negative amplitudes with
    v2 <= v1 (canonical ordering), omega equal to the component power sum to
    1e-12 relative, and at least one of v1, diffuse_power strictly positive.
    """

    v1: float
    v2: float
    diffuse_power: float
    omega: float

    def __post_init__(self):
        problems = []
        if not (math.isfinite(self.v1) and self.v1 >= 0):
            problems.append(f"v1 must be finite and >= 0, got {self.v1}")
        if not (math.isfinite(self.v2) and self.v2 >= 0):
            problems.append(f"v2 must be finite and >= 0, got {self.v2}")
        if not (math.isfinite(self.diffuse_power) and self.diffuse_power >= 0):
            problems.append(
                f"diffuse_power must be finite and >= 0, got {self.diffuse_power}"
            )
        if not (math.isfinite(self.omega) and self.omega > 0):
            problems.append(f"omega must be finite and > 0, got {self.omega}")
        if problems:
            raise ParameterError("; ".join(problems))
        if self.v2 > self.v1:
            raise ParameterError(
                f"canonical ordering requires v2 <= v1, got v1={self.v1}, v2={self.v2}"
            )
        if self.v1 == 0 and self.diffuse_power == 0:
            raise ParameterError("at least one of v1, diffuse_power must be > 0")
        total = self.v1 ** 2 + self.v2 ** 2 + self.diffuse_power
        if abs(total - self.omega) > _OMEGA_RTOL * self.omega:
            raise ParameterError(
                f"omega={self.omega} does not match component power sum {total}"
            )

    @classmethod
    def from_components(cls, v1: float, v2: float, diffuse_power: float) -> "ChannelParams":
        """Build params with omega computed from the component powers."""
        return cls(v1, v2, diffuse_power, v1 ** 2 + v2 ** 2 + diffuse_power)

    @property
    def specular_power(self) -> float:
        return self.v1 ** 2 + self.v2 ** 2


def from_k_gamma(k: float, gamma: float, omega: float = DEFAULT_OMEGA) -> ChannelParams:
    """Construct ChannelParams from the shape parameters (k, gamma).

    The diffuse power is omega/(1+k) and the specular power omega*k/(1+k) is
    split between the tones so that v2 = gamma*v1.
    """
    if not (math.isfinite(k) and k >= 0):
        raise ParameterError(f"k must be finite and >= 0, got {k}")
    if not (0.0 <= gamma <= 1.0):
        raise ParameterError(f"gamma must lie in [0, 1], got {gamma}")
    if not (math.isfinite(omega) and omega > 0):
        raise ParameterError(f"omega must be finite and > 0, got {omega}")
    diffuse = omega / (1.0 + k)
    v1_sq = omega * k / ((1.0 + k) * (1.0 + gamma ** 2))
    v1 = math.sqrt(v1_sq)
    return ChannelParams(v1, gamma * v1, diffuse, omega)


def to_k_gamma(p: ChannelParams) -> tuple[float, float]:
    """Recover (k, gamma) from linear params.

    k is +inf when there is no diffuse power; gamma is 0 when both tones
    vanish.  A lone second tone (v1=0, v2>0) violates the canonical ordering
    and is rejected.
    """
    if p.v1 == 0 and p.v2 > 0:
        raise ParameterError("v1=0 with v2>0 violates canonical ordering")
    if p.diffuse_power == 0:
        k = math.inf
    else:
        k = p.specular_power / p.diffuse_power
    gamma = 0.0 if p.v1 == 0 else p.v2 / p.v1
    return k, gamma


@dataclass(frozen=True)
class SpecularSpec:
    """One specular tone: amplitude, arrival angle, and derived phase rate."""

    amplitude: float
    aoa: float
    phase_rate: float


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one simulation experiment.

    Not validated at construction; run it through :func:`validate_scenario`
    to get a :class:`ValidatedScenario` with wrapped angles and derived tone
    phase rates, or the full list of violated constraints.
    """

    params: ChannelParams
    aoa1: float
    aoa2: float
    doppler_hz: float
    sample_period_s: float
    n_sinusoids: int
    n_trials: int
    n_samples: int
    seed: int


@dataclass(frozen=True)
class ValidatedScenario:
    """Normalized scenario: angles wrapped to [-pi, pi), phase rates attached."""

    params: ChannelParams
    aoa1: float
    aoa2: float
    doppler_hz: float
    sample_period_s: float
    n_sinusoids: int
    n_trials: int
    n_samples: int
    seed: int
    spec1: SpecularSpec
    spec2: SpecularSpec

    @property
    def fd_ts(self) -> float:
        return self.doppler_hz * self.sample_period_s

    @property
    def rates(self) -> tuple[float, float]:
        return self.spec1.phase_rate, self.spec2.phase_rate

    def digest(self) -> str:
        """Hex digest of the per-trace generation inputs.

        Covers everything that determines an individual trace (params, AoAs,
        Doppler, sampling, sinusoid count, length, seed).  The trial count is
        excluded: it selects how many traces exist, not their content, and is
        not part of the persisted trace header.
        """
        blob = struct.pack(
            "<8d2IQQ",
            self.params.v1,
            self.params.v2,
            self.params.diffuse_power,
            self.params.omega,
            self.aoa1,
            self.aoa2,
            self.doppler_hz,
            self.sample_period_s,
            self.n_sinusoids,
            0,
            self.n_samples,
            self.seed,
        )
        return hashlib.sha256(blob).hexdigest()[:16]


def scenario_violations(cfg: ScenarioConfig) -> list[str]:
    """Return the complete list of constraint violations (empty if valid)."""
    errors = []
    if not (math.isfinite(cfg.doppler_hz) and cfg.doppler_hz > 0):
        errors.append(f"doppler: doppler_hz must be > 0, got {cfg.doppler_hz}")
    if not (math.isfinite(cfg.sample_period_s) and cfg.sample_period_s > 0):
        errors.append(
            f"sampling: sample_period_s must be > 0, got {cfg.sample_period_s}"
        )
    if not errors and cfg.doppler_hz * cfg.sample_period_s > 0.5:
        errors.append(
            "doppler_sampling: f_D*T_s = "
            f"{cfg.doppler_hz * cfg.sample_period_s:g} exceeds the 0.5 bound"
        )
    if cfg.n_sinusoids < 1:
        errors.append(f"n_sinusoids: must be >= 1, got {cfg.n_sinusoids}")
    if cfg.n_trials < 1:
        errors.append(f"n_trials: must be >= 1, got {cfg.n_trials}")
    if cfg.n_samples < 2:
        errors.append(f"n_samples: must be >= 2, got {cfg.n_samples}")
    if not (0 <= cfg.seed < 2 ** 64):
        errors.append(f"seed: must be an unsigned 64-bit integer, got {cfg.seed}")
    for name in ("aoa1", "aoa2"):
        if not math.isfinite(getattr(cfg, name)):
            errors.append(f"{name}: must be finite, got {getattr(cfg, name)}")
    return errors


def validate_scenario(cfg: ScenarioConfig) -> ValidatedScenario:
    """Normalize and validate a scenario.

    Raises :class:`InvalidScenarioError` carrying every violated constraint;
    otherwise returns the scenario with wrapped angles and the two tone
    specs (amplitude, AoA, phase rate) attached.
    """
    errors = scenario_violations(cfg)
    if errors:
        raise InvalidScenarioError(errors)
    aoa1 = wrap_angle(cfg.aoa1)
    aoa2 = wrap_angle(cfg.aoa2)
    spec1 = SpecularSpec(cfg.params.v1, aoa1, phase_rate(aoa1, cfg.doppler_hz))
    spec2 = SpecularSpec(cfg.params.v2, aoa2, phase_rate(aoa2, cfg.doppler_hz))
    return ValidatedScenario(
        params=cfg.params,
        aoa1=aoa1,
        aoa2=aoa2,
        doppler_hz=cfg.doppler_hz,
        sample_period_s=cfg.sample_period_s,
        n_sinusoids=cfg.n_sinusoids,
        n_trials=cfg.n_trials,
        n_samples=cfg.n_samples,
        seed=cfg.seed,
        spec1=spec1,
        spec2=spec2,
    )


def make_scenario(
    k: float = 0.0,
    gamma: float = 0.0,
    omega: float = DEFAULT_OMEGA,
    aoa1: float = DEFAULT_AOA1,
    aoa2: float = DEFAULT_AOA2,
    doppler_hz: float = DEFAULT_DOPPLER_HZ,
    fd_ts: float = DEFAULT_FD_TS,
    n_sinusoids: int = DEFAULT_N_SINUSOIDS,
    n_trials: int = DEFAULT_N_TRIALS,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
    params: ChannelParams | None = None,
) -> ScenarioConfig:
    """Convenience builder with the common experiment defaults.

    Channel parameters come from (k, gamma, omega) unless ``params`` is given
    explicitly.  The sample period derives from the normalized product
    ``fd_ts = f_D * T_s``.
    """
    if params is None:
        params = from_k_gamma(k, gamma, omega)
    return ScenarioConfig(
        params=params,
        aoa1=aoa1,
        aoa2=aoa2,
        doppler_hz=doppler_hz,
        sample_period_s=fd_ts / doppler_hz,
        n_sinusoids=n_sinusoids,
        n_trials=n_trials,
        n_samples=n_samples,
        seed=seed,
    )


def with_overrides(cfg: ScenarioConfig, **kwargs) -> ScenarioConfig:
    """Copy a scenario with some fields replaced."""
    return replace(cfg, **kwargs)

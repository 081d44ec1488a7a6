"""Ensemble estimators: correlations, envelope histogram, crossing rates.

Correlation statistics are estimated by averaging lag products over the trial
ensemble and over a deterministic set of anchor times (every 10th sample by
default, keeping every anchor clear of the final max-lag window).  The anchor
averaging is a variance reducer justified by the stationarity the suite also
verifies; per-trial values remain available for standard-error estimates.

The product sums are computed as FFT cross-correlations of anchor-masked
traces, which is exact (no windowing approximations) and returns every lag at
once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as sp_fft

from .sos import TraceEnsemble
from .theory import CorrelationSeries, LagGrid

ESTIMATOR_KINDS = ("rxx", "ryy", "rxy", "ryx", "rzz", "rzz_re", "rzz_im", "rsq")

DEFAULT_ANCHOR_STRIDE = 10
_FFT_TRIAL_CHUNK = 256


class LagError(ValueError):
    """Raised for lags that are off the sample grid or too long."""


@dataclass(frozen=True, eq=False)
class HistogramDensity:
    """Unit-integral envelope histogram."""

    bin_edges: np.ndarray
    densities: np.ndarray
    n_samples: int

    def cdf_at_edges(self) -> np.ndarray:
        """Cumulative distribution at every bin edge (starts at 0)."""
        widths = np.diff(self.bin_edges)
        return np.concatenate(([0.0], np.cumsum(self.densities * widths)))


@dataclass(frozen=True, eq=False)
class LcrCurve:
    """Normalized upward crossing rates over a threshold grid."""

    thresholds: np.ndarray
    rates: np.ndarray
    observation_time_s: float


def lag_samples(grid: LagGrid, sample_period_s: float, n_samples: int) -> np.ndarray:
    """Convert grid lags to sample counts, rejecting off-grid or long lags."""
    ratio = grid.lags_s / sample_period_s
    lags = np.rint(ratio).astype(int)
    if np.any(np.abs(ratio - lags) > 1e-6):
        raise LagError("lag grid contains lags that are not multiples of T_s")
    if lags[-1] >= n_samples:
        raise LagError(
            f"max lag {lags[-1]} samples exceeds trace length {n_samples}"
        )
    return lags


def default_anchors(
    n_samples: int, max_lag: int, stride: int = DEFAULT_ANCHOR_STRIDE
) -> np.ndarray:
    """Every ``stride``-th sample, excluding the final max-lag window."""
    stop = n_samples - max_lag
    if stop < 1:
        raise LagError(
            f"trace length {n_samples} leaves no anchor clear of max lag {max_lag}"
        )
    return np.arange(0, stop, stride)


def _masked_crosscorr(
    left: np.ndarray, right: np.ndarray, mask: np.ndarray, n_lags: int
) -> np.ndarray:
    """Per-trial sums over t of left[t]*mask[t]*right[t+l] for l = 0..n_lags-1."""
    n = left.shape[1]
    nfft = sp_fft.next_fast_len(n + n_lags)
    out = np.empty((left.shape[0], n_lags))
    for start in range(0, left.shape[0], _FFT_TRIAL_CHUNK):
        stop = start + _FFT_TRIAL_CHUNK
        lf = sp_fft.rfft(left[start:stop] * mask, nfft, axis=1)
        rf = sp_fft.rfft(right[start:stop], nfft, axis=1)
        np.conjugate(lf, out=lf)
        lf *= rf
        out[start:stop] = sp_fft.irfft(lf, nfft, axis=1)[:, :n_lags]
    return out


def per_trial_correlation(
    ens: TraceEnsemble,
    kind: str,
    grid: LagGrid,
    anchors: np.ndarray | None = None,
) -> np.ndarray:
    """Anchor-averaged lag products per trial, shape (n_trials, n_lags).

    ``kind`` follows the quadrature decomposition x = Re z, y = Im z:
    rxx/ryy/rxy/ryx are the component products, rzz is z(t)*conj(z(t+tau))
    (complex output; rzz_re/rzz_im select one part), rsq is |z|^2 products.
    """
    if kind not in ESTIMATOR_KINDS:
        raise ValueError(f"unknown estimator kind {kind!r}")
    scn = ens.scenario
    lags = lag_samples(grid, scn.sample_period_s, scn.n_samples)
    if anchors is None:
        anchors = default_anchors(scn.n_samples, int(lags[-1]))
    anchors = np.asarray(anchors, dtype=int)
    if anchors.size == 0:
        raise LagError("anchor set is empty")
    if anchors[-1] + lags[-1] >= scn.n_samples:
        raise LagError("anchor set overlaps the final max-lag window")

    z = ens.sample_matrix
    mask = np.zeros(scn.n_samples)
    mask[anchors] = 1.0
    n_lags = int(lags[-1]) + 1

    def corr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return _masked_crosscorr(a, b, mask, n_lags)[:, lags] / anchors.size

    x, y = z.real, z.imag
    if kind == "rxx":
        return corr(x, x)
    if kind == "ryy":
        return corr(y, y)
    if kind == "rxy":
        return corr(x, y)
    if kind == "ryx":
        return corr(y, x)
    if kind == "rsq":
        s = x * x + y * y
        return corr(s, s)
    # complex-envelope products: re = xx + yy, im = yx - xy
    re = corr(x, x) + corr(y, y)
    im = corr(y, x) - corr(x, y)
    if kind == "rzz_re":
        return re
    if kind == "rzz_im":
        return im
    return re + 1j * im


def ensemble_correlation(
    ens: TraceEnsemble,
    kind: str,
    grid: LagGrid,
    anchors: np.ndarray | None = None,
) -> CorrelationSeries:
    """Ensemble-and-anchor averaged correlation as a CorrelationSeries."""
    if kind == "rzz":
        raise ValueError("request rzz_re or rzz_im for series output")
    per_trial = per_trial_correlation(ens, kind, grid, anchors)
    values = per_trial.mean(axis=0)
    return CorrelationSeries(kind, "empirical", grid, values, n_trials=ens.n_trials)


def ensemble_mean(ens: TraceEnsemble) -> complex:
    """Mean of z over all trials and times (zero for valid scenarios)."""
    return complex(ens.sample_matrix.mean())


def decorrelation_stride(scenario) -> int:
    """Sample stride putting consecutive envelope picks ~2 Doppler cycles apart."""
    return max(1, math.ceil(2.0 / (scenario.doppler_hz * scenario.sample_period_s)))


def envelope_picks(ens: TraceEnsemble, stride: int | None = None) -> np.ndarray:
    """Decorrelated envelope samples, one per stride per trial."""
    if stride is None:
        stride = decorrelation_stride(ens.scenario)
    return np.abs(ens.sample_matrix[:, ::stride]).ravel()


def envelope_pdf(
    ens: TraceEnsemble,
    bins: int = 100,
    value_range: tuple[float, float] = (0.0, 3.0),
) -> HistogramDensity:
    """Histogram density of decorrelated envelope picks, normalized to 1.

    The range must cover every observed pick; silently dropping samples would
    break the unit-integral invariant.
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    if ens.n_trials == 0:
        raise ValueError("empty ensemble")
    picks = envelope_picks(ens)
    lo, hi = value_range
    if picks.min() < lo or picks.max() >= hi:
        raise ValueError(
            f"range [{lo}, {hi}) does not cover observed envelopes "
            f"[{picks.min():g}, {picks.max():g}]"
        )
    counts, edges = np.histogram(picks, bins=bins, range=value_range)
    widths = np.diff(edges)
    densities = counts / (picks.size * widths)
    return HistogramDensity(edges, densities, picks.size)


def per_trial_crossing_rates(
    ens: TraceEnsemble, thresholds: np.ndarray
) -> np.ndarray:
    """Normalized upward crossing rates per trial, shape (n_trials, n_thresholds).

    An upward crossing is a sample pair (at-or-below, above); counts divide by
    the per-trial observation time and the maximum Doppler frequency.
    """
    thresholds = np.atleast_1d(np.asarray(thresholds, dtype=float))
    if np.any(thresholds < 0):
        raise ValueError("thresholds must be >= 0")
    scn = ens.scenario
    env = np.abs(ens.sample_matrix)
    obs_time = (scn.n_samples - 1) * scn.sample_period_s
    rates = np.empty((ens.n_trials, thresholds.size))
    for j, rho in enumerate(thresholds):
        ups = ((env[:, :-1] <= rho) & (env[:, 1:] > rho)).sum(axis=1)
        rates[:, j] = ups / obs_time / scn.doppler_hz
    return rates


def level_crossing_rate(ens: TraceEnsemble, thresholds) -> LcrCurve:
    """Trial-averaged normalized level crossing rate curve."""
    thresholds = np.atleast_1d(np.asarray(thresholds, dtype=float))
    rates = per_trial_crossing_rates(ens, thresholds).mean(axis=0)
    scn = ens.scenario
    total_time = ens.n_trials * (scn.n_samples - 1) * scn.sample_period_s
    return LcrCurve(thresholds, rates, total_time)

"""Binary trace persistence and delimited series output.

Trace file layout (little-endian, fixed offsets, declaration order):

    offset  size  field
         0     8  magic "TWDPTRC1"
         8     2  version (u16, currently 1)
        10    32  v1, v2, diffuse_power, omega (4 x f64)
        42    32  aoa1, aoa2, doppler_hz, sample_period_s (4 x f64)
        74     4  n_sinusoids (u32)
        78     4  trial_index (u32)
        82     8  seed (u64)
        90     8  n_samples (u64)
        98     -  payload: n_samples interleaved (re, im) f64 pairs

CSV series carry a header row and numeric rows printed with 17 significant
digits so every float64 round-trips exactly.
"""

from __future__ import annotations

import json
import struct
from contextlib import contextmanager
from os import PathLike

import numpy as np

from .params import ChannelParams, ScenarioConfig, validate_scenario
from .sos import FadingTrace

TRACE_MAGIC = b"TWDPTRC1"
TRACE_VERSION = 1
_HEADER = struct.Struct("<8sH8dIIQQ")


class TraceFormatError(ValueError):
    """Base class for malformed trace files."""


class BadMagicError(TraceFormatError):
    pass


class VersionMismatchError(TraceFormatError):
    pass


class TruncatedPayloadError(TraceFormatError):
    pass


@contextmanager
def _open_binary(target, mode: str):
    if isinstance(target, (str, PathLike)):
        with open(target, mode) as handle:
            yield handle
    else:
        yield target


@contextmanager
def _open_text(target):
    if isinstance(target, (str, PathLike)):
        with open(target, "w") as handle:
            yield handle
    else:
        yield target


def write_trace(trace: FadingTrace, sink) -> None:
    """Write one trace (header + interleaved f64 IQ payload) to a path or file."""
    scn = trace.scenario
    header = _HEADER.pack(
        TRACE_MAGIC,
        TRACE_VERSION,
        scn.params.v1,
        scn.params.v2,
        scn.params.diffuse_power,
        scn.params.omega,
        scn.aoa1,
        scn.aoa2,
        scn.doppler_hz,
        scn.sample_period_s,
        scn.n_sinusoids,
        trace.trial_index,
        trace.seed,
        trace.samples.size,
    )
    payload = np.ascontiguousarray(trace.samples, dtype="<c16").tobytes()
    with _open_binary(sink, "wb") as handle:
        handle.write(header)
        handle.write(payload)


def read_trace(source) -> FadingTrace:
    """Read a trace written by :func:`write_trace`.

    Raises BadMagicError, VersionMismatchError, or TruncatedPayloadError for
    the corresponding corruptions.  The returned trace's scenario records one
    trial (the ensemble size is not a per-trace property).
    """
    with _open_binary(source, "rb") as handle:
        raw = handle.read()
    if len(raw) < _HEADER.size:
        raise TruncatedPayloadError(
            f"file holds {len(raw)} bytes, header needs {_HEADER.size}"
        )
    (
        magic,
        version,
        v1,
        v2,
        diffuse_power,
        omega,
        aoa1,
        aoa2,
        doppler_hz,
        sample_period_s,
        n_sinusoids,
        trial_index,
        seed,
        n_samples,
    ) = _HEADER.unpack_from(raw)
    if magic != TRACE_MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != TRACE_VERSION:
        raise VersionMismatchError(f"unsupported trace version {version}")
    expected = _HEADER.size + 16 * n_samples
    if len(raw) < expected:
        raise TruncatedPayloadError(
            f"payload declares {n_samples} samples ({expected} bytes) "
            f"but file holds {len(raw)}"
        )
    samples = np.frombuffer(
        raw, dtype="<c16", count=n_samples, offset=_HEADER.size
    ).astype(np.complex128)
    scenario = validate_scenario(
        ScenarioConfig(
            params=ChannelParams(v1, v2, diffuse_power, omega),
            aoa1=aoa1,
            aoa2=aoa2,
            doppler_hz=doppler_hz,
            sample_period_s=sample_period_s,
            n_sinusoids=n_sinusoids,
            n_trials=1,
            n_samples=n_samples,
            seed=seed,
        )
    )
    return FadingTrace(
        samples=samples,
        sample_period_s=sample_period_s,
        scenario_digest=scenario.digest(),
        trial_index=trial_index,
        seed=seed,
        scenario=scenario,
    )


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def write_series_csv(sink, columns: list[str], rows: np.ndarray) -> None:
    """Write a rectangular numeric table with a header row."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != len(columns):
        raise ValueError(
            f"{len(columns)} columns declared but rows have {rows.shape[1]} fields"
        )
    if not np.all(np.isfinite(rows)):
        raise ValueError("series values must be finite")
    with _open_text(sink) as handle:
        handle.write(",".join(columns) + "\n")
        for row in rows:
            handle.write(",".join(format_float(v) for v in row) + "\n")


def read_series_csv(source) -> tuple[list[str], np.ndarray]:
    """Parse a table written by :func:`write_series_csv`."""
    if isinstance(source, (str, PathLike)):
        with open(source, "r") as handle:
            lines = handle.read().splitlines()
    else:
        lines = source.read().splitlines()
    if not lines:
        raise ValueError("empty series file")
    columns = lines[0].split(",")
    rows = np.array(
        [[float(field) for field in line.split(",")] for line in lines[1:] if line],
        dtype=float,
    )
    if rows.size and rows.shape[1] != len(columns):
        raise ValueError("row width does not match header")
    return columns, rows


def write_series_json(sink, columns: list[str], rows: np.ndarray) -> None:
    """JSON mirror of the CSV table: {"columns": [...], "rows": [[...], ...]}."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != len(columns):
        raise ValueError(
            f"{len(columns)} columns declared but rows have {rows.shape[1]} fields"
        )
    if not np.all(np.isfinite(rows)):
        raise ValueError("series values must be finite")
    doc = {"columns": list(columns), "rows": rows.tolist()}
    payload = json.dumps(doc, indent=2, sort_keys=True)
    with _open_text(sink) as handle:
        handle.write(payload + "\n")

"""Command-line surface: trace generation, closed-form series, empirical
statistics, and the validation suite.

Subcommands: gen, theory, acf, pdf, lcr, validate.  Exit status 0 on success,
1 when the validation verdict fails, 2 for usage or configuration errors.
Every run logs the fully resolved scenario (post-defaults) to stderr so any
output can be reproduced from the log alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import estimators, fileio, harness, sos, theory
from .params import (
    DEFAULT_AOA1,
    DEFAULT_AOA2,
    DEFAULT_DOPPLER_HZ,
    DEFAULT_FD_TS,
    DEFAULT_N_SAMPLES,
    DEFAULT_N_SINUSOIDS,
    DEFAULT_N_TRIALS,
    DEFAULT_OMEGA,
    ChannelParams,
    InvalidScenarioError,
    ParameterError,
    ScenarioConfig,
    from_k_gamma,
    validate_scenario,
)


class ConfigError(ValueError):
    """Raised for malformed or ambiguous configuration documents."""


_FLOAT_KEYS = {
    "k",
    "gamma",
    "omega",
    "v1",
    "v2",
    "diffuse_power",
    "aoa1_rad",
    "aoa2_rad",
    "doppler_hz",
    "fd_ts",
}
_INT_KEYS = {"n_sinusoids", "n_trials", "n_samples", "seed"}
_SHAPE_KEYS = {"k", "gamma"}
_COMPONENT_KEYS = {"v1", "v2", "diffuse_power"}


def parse_config(text: str) -> ScenarioConfig:
    """Parse a flat "key = value" document into a scenario.

    Unspecified fields take the common defaults (8 sinusoids, 500 trials,
    f_D*T_s = 0.01, f_D = 1 kHz, unit power, Rayleigh parameters).  Channel
    power may be given either as (k, gamma[, omega]) or as component powers
    (v1, v2, diffuse_power); mixing the two families is ambiguous and
    rejected, as are unknown keys.
    """
    values: dict[str, float | int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(raw_value)
            elif key in _INT_KEYS:
                values[key] = int(raw_value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None

    shape_given = _SHAPE_KEYS & values.keys()
    component_given = _COMPONENT_KEYS & values.keys()
    if component_given and (shape_given or "omega" in values):
        raise ConfigError(
            "ambiguous channel specification: give (k, gamma, omega) or "
            "(v1, v2, diffuse_power), not both"
        )
    try:
        if component_given:
            params = ChannelParams.from_components(
                values.get("v1", 0.0),
                values.get("v2", 0.0),
                values.get("diffuse_power", 0.0),
            )
        else:
            params = from_k_gamma(
                values.get("k", 0.0),
                values.get("gamma", 0.0),
                values.get("omega", DEFAULT_OMEGA),
            )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None

    doppler_hz = values.get("doppler_hz", DEFAULT_DOPPLER_HZ)
    fd_ts = values.get("fd_ts", DEFAULT_FD_TS)
    if doppler_hz <= 0:
        raise ConfigError(f"doppler_hz must be > 0, got {doppler_hz}")
    return ScenarioConfig(
        params=params,
        aoa1=values.get("aoa1_rad", DEFAULT_AOA1),
        aoa2=values.get("aoa2_rad", DEFAULT_AOA2),
        doppler_hz=doppler_hz,
        sample_period_s=fd_ts / doppler_hz,
        n_sinusoids=values.get("n_sinusoids", DEFAULT_N_SINUSOIDS),
        n_trials=values.get("n_trials", DEFAULT_N_TRIALS),
        n_samples=values.get("n_samples", DEFAULT_N_SAMPLES),
        seed=values.get("seed", 0),
    )


def _load_scenario(args) -> ScenarioConfig:
    text = Path(args.config).read_text() if args.config else ""
    cfg = parse_config(text)
    seed = getattr(args, "seed", None)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    return cfg


def _log_scenario(scn) -> None:
    doc = {
        "v1": scn.params.v1,
        "v2": scn.params.v2,
        "diffuse_power": scn.params.diffuse_power,
        "omega": scn.params.omega,
        "aoa1_rad": scn.aoa1,
        "aoa2_rad": scn.aoa2,
        "doppler_hz": scn.doppler_hz,
        "sample_period_s": scn.sample_period_s,
        "n_sinusoids": scn.n_sinusoids,
        "n_trials": scn.n_trials,
        "n_samples": scn.n_samples,
        "seed": scn.seed,
    }
    print("resolved scenario: " + json.dumps(doc, sort_keys=True), file=sys.stderr)


def _write_table(args, columns, rows) -> None:
    sink = args.out if args.out else sys.stdout
    if args.format == "json":
        fileio.write_series_json(sink, columns, rows)
    else:
        fileio.write_series_csv(sink, columns, rows)


def _default_grid(scn, cap_to_trace: bool) -> theory.LagGrid:
    n_lags = int(round(harness.CORRELATION_FD_TAU_MAX / scn.fd_ts)) + 1
    if cap_to_trace:
        n_lags = min(n_lags, scn.n_samples - 1)
    return theory.LagGrid.from_sample_lags(
        n_lags, scn.sample_period_s, scn.doppler_hz
    )


def _theory_series(scn, kind: str, model: str, grid):
    p, rates, fd = scn.params, scn.rates, scn.doppler_hz
    if kind == "rxx":
        return [theory.ref_acf_quadrature(p, rates, fd, grid)]
    if kind == "rxy":
        return [theory.ref_ccf_quadrature(p, rates, grid)]
    if kind == "rzz":
        return list(theory.ref_acf_complex(p, rates, fd, grid))
    if model == "simulator":
        return [theory.sim_acf_squared(p, rates, fd, scn.n_sinusoids, grid)]
    return [theory.ref_acf_squared(p, rates, fd, grid)]


def _cmd_gen(args) -> int:
    scn = validate_scenario(_load_scenario(args))
    _log_scenario(scn)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for idx in range(scn.n_trials):
        trace = sos.generate_trace(scn, idx)
        fileio.write_trace(trace, out_dir / f"trace_{idx:05d}.twdptrc")
    print(f"wrote {scn.n_trials} trace files to {out_dir}")
    return 0


def _cmd_theory(args) -> int:
    scn = validate_scenario(_load_scenario(args))
    _log_scenario(scn)
    grid = _default_grid(scn, cap_to_trace=False)
    series = _theory_series(scn, args.kind, args.model, grid)
    if args.kind == "rzz":
        columns = ["lag_s", "fd_tau", "value_re", "value_im"]
        rows = np.column_stack(
            [grid.lags_s, grid.fd_tau, series[0].values, series[1].values]
        )
    else:
        columns = ["lag_s", "fd_tau", "value"]
        rows = np.column_stack([grid.lags_s, grid.fd_tau, series[0].values])
    _write_table(args, columns, rows)
    return 0


def _cmd_acf(args) -> int:
    scn = validate_scenario(_load_scenario(args))
    _log_scenario(scn)
    grid = _default_grid(scn, cap_to_trace=True)
    ens = sos.generate_ensemble(scn)
    oracle = _theory_series(scn, args.kind, "simulator", grid)
    if args.kind == "rzz":
        per_trial = estimators.per_trial_correlation(ens, "rzz", grid)
        mean = per_trial.mean(axis=0)
        columns = ["lag_s", "fd_tau", "value_re", "value_im", "oracle_re", "oracle_im"]
        rows = np.column_stack(
            [grid.lags_s, grid.fd_tau, mean.real, mean.imag,
             oracle[0].values, oracle[1].values]
        )
    else:
        empirical = estimators.ensemble_correlation(ens, args.kind, grid)
        columns = ["lag_s", "fd_tau", "value", "oracle_value"]
        rows = np.column_stack(
            [grid.lags_s, grid.fd_tau, empirical.values, oracle[0].values]
        )
    _write_table(args, columns, rows)
    return 0


def _cmd_pdf(args) -> int:
    scn = validate_scenario(_load_scenario(args))
    _log_scenario(scn)
    ens = sos.generate_ensemble(scn)
    hist = estimators.envelope_pdf(ens, bins=args.bins, value_range=harness.PDF_RANGE)
    centers = 0.5 * (hist.bin_edges[:-1] + hist.bin_edges[1:])
    oracle = theory.envelope_pdf_reference(scn.params, centers)
    columns = ["bin_left", "bin_right", "density", "oracle_density"]
    rows = np.column_stack(
        [hist.bin_edges[:-1], hist.bin_edges[1:], hist.densities, oracle]
    )
    _write_table(args, columns, rows)
    return 0


def _cmd_lcr(args) -> int:
    scn = validate_scenario(_load_scenario(args))
    _log_scenario(scn)
    ens = sos.generate_ensemble(scn)
    curve = estimators.level_crossing_rate(ens, harness.LCR_THRESHOLDS)
    if scn.params.v1 == 0 and scn.params.v2 == 0:
        oracle = theory.rayleigh_lcr_oracle(curve.thresholds)
        columns = ["rho", "rate", "oracle_rate"]
        rows = np.column_stack([curve.thresholds, curve.rates, oracle])
    else:
        columns = ["rho", "rate"]
        rows = np.column_stack([curve.thresholds, curve.rates])
    _write_table(args, columns, rows)
    return 0


def _cmd_validate(args) -> int:
    if args.config:
        cfg = parse_config(Path(args.config).read_text())
        scenarios = [
            harness.ValidationScenario(
                name="configured",
                scenario=cfg,
                statistics=("rxx", "rxy", "rzz_re", "rzz_im", "rsq"),
                tolerances={
                    s: harness.Tolerance(0.05, 0.025)
                    for s in ("rxx", "rxy", "rzz_re", "rzz_im", "rsq")
                },
                oracle="simulator_formula",
            )
        ]
    else:
        scenarios = harness.builtin_scenarios()
    seed = args.seed if args.seed is not None else 0
    print(
        f"validation: {len(scenarios)} scenario(s), master seed {seed}; "
        "per-scenario seeds appear in the report",
        file=sys.stderr,
    )
    report = harness.run_validation(scenarios, seed)
    payload = report.to_json()
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)
    for rec in report.records:
        status = "pass" if rec.passed else "FAIL"
        print(
            f"{status}  {rec.scenario:24s} {rec.statistic:8s} "
            f"max_abs={rec.max_abs_dev:.4g} (tol {rec.tol_max_abs:g}) "
            f"rms={rec.rms_dev:.4g} (tol {rec.tol_rms:g})",
            file=sys.stderr,
        )
    return 0 if report.overall_passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twdpsim",
        description="TWDP fading simulator, closed-form statistics, and validation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_seed=True):
        p.add_argument("--config", help="scenario config file (key = value lines)")
        if needs_seed:
            p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_gen = sub.add_parser("gen", help="generate binary trace files, one per trial")
    p_gen.add_argument("--config")
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--out", required=True, help="output directory")

    p_theory = sub.add_parser("theory", help="closed-form correlation series")
    common(p_theory, needs_seed=False)
    p_theory.add_argument("--kind", choices=("rxx", "rxy", "rzz", "rsq"), required=True)
    p_theory.add_argument("--model", choices=("reference", "simulator"), default="reference")

    p_acf = sub.add_parser("acf", help="empirical correlation with oracle columns")
    common(p_acf)
    p_acf.add_argument("--kind", choices=("rxx", "rxy", "rzz", "rsq"), required=True)

    p_pdf = sub.add_parser("pdf", help="envelope histogram with reference density")
    common(p_pdf)
    p_pdf.add_argument("--bins", type=int, default=harness.PDF_BINS)

    p_lcr = sub.add_parser("lcr", help="level crossing rate curve")
    common(p_lcr)

    p_val = sub.add_parser("validate", help="run validation scenarios")
    p_val.add_argument("--config", help="validate one configured scenario instead of the builtins")
    p_val.add_argument("--seed", type=int, help="master seed (default 0)")
    p_val.add_argument("--out", help="report path (default: stdout)")
    p_val.add_argument("--format", choices=("csv", "json"), default="json")
    return parser


_COMMANDS = {
    "gen": _cmd_gen,
    "theory": _cmd_theory,
    "acf": _cmd_acf,
    "pdf": _cmd_pdf,
    "lcr": _cmd_lcr,
    "validate": _cmd_validate,
}


def cli_dispatch(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, InvalidScenarioError, ParameterError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()

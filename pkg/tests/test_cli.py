import json
import math

import numpy as np
import pytest

from twdpsim.cli import ConfigError, cli_dispatch, parse_config
from twdpsim.fileio import read_series_csv, read_trace
from twdpsim.params import DEFAULT_AOA1, DEFAULT_AOA2


class TestParseConfig:
    def test_empty_document_gives_rayleigh_defaults(self):
        cfg = parse_config("")
        assert cfg.params.v1 == 0.0 and cfg.params.v2 == 0.0
        assert cfg.params.diffuse_power == 1.0
        assert cfg.n_sinusoids == 8
        assert cfg.n_trials == 500
        assert cfg.doppler_hz == 1000.0
        assert cfg.doppler_hz * cfg.sample_period_s == pytest.approx(0.01)
        assert cfg.aoa1 == DEFAULT_AOA1 and cfg.aoa2 == DEFAULT_AOA2

    def test_explicit_rayleigh(self):
        cfg = parse_config("k = 0\n")
        assert cfg.params.diffuse_power == 1.0

    def test_figure_geometry(self):
        text = "k = 10\ngamma = 1\naoa1_rad = 0.785398\naoa2_rad = 2.094395\n"
        cfg = parse_config(text)
        assert cfg.aoa1 == pytest.approx(math.pi / 4, abs=1e-6)
        assert cfg.aoa2 == pytest.approx(2 * math.pi / 3, abs=1e-6)
        assert cfg.params.v1 == cfg.params.v2

    def test_component_route(self):
        cfg = parse_config("v1 = 1.0\nv2 = 0.5\ndiffuse_power = 0.25\n")
        assert cfg.params.omega == pytest.approx(1.5)

    def test_ambiguous_families_rejected(self):
        with pytest.raises(ConfigError, match="ambiguous"):
            parse_config("k = 10\nv1 = 1.0\n")
        with pytest.raises(ConfigError, match="ambiguous"):
            parse_config("omega = 2\nv1 = 1.0\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config("dopplerr_hz = 100\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config("k = 1\nk = 2\n")

    def test_comments_and_blank_lines(self):
        cfg = parse_config("# comment\n\nk = 2  # trailing\nseed = 9\n")
        assert cfg.seed == 9

    def test_malformed_line(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config("just words\n")

    def test_bad_params_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("gamma = 1.5\n")


@pytest.fixture()
def rayleigh_cfg(tmp_path):
    path = tmp_path / "rayleigh.cfg"
    path.write_text("k = 0\n")
    return path


@pytest.fixture()
def small_cfg(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text(
        "k = 10\ngamma = 0.5\nn_trials = 300\nn_samples = 3001\nseed = 4\n"
    )
    return path


class TestCliDispatch:
    def test_unknown_subcommand_exits_2(self, capsys):
        assert cli_dispatch(["frobnicate"]) == 2
        capsys.readouterr()

    def test_unknown_flag_exits_2(self, capsys):
        assert cli_dispatch(["theory", "--kind", "rxx", "--frob"]) == 2
        capsys.readouterr()

    def test_config_error_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("nope = 1\n")
        assert cli_dispatch(["theory", "--kind", "rxx", "--config", str(bad)]) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_theory_rsq_simulator_zero_lag(self, rayleigh_cfg, tmp_path, capsys):
        out = tmp_path / "rsq.csv"
        code = cli_dispatch(
            ["theory", "--kind", "rsq", "--model", "simulator",
             "--config", str(rayleigh_cfg), "--out", str(out)]
        )
        assert code == 0
        assert "resolved scenario" in capsys.readouterr().err
        cols, rows = read_series_csv(out)
        assert cols == ["lag_s", "fd_tau", "value"]
        assert rows[0, 1] == 0.0
        assert abs(rows[0, 2] - 1.875) < 1e-12

    def test_theory_rzz_columns(self, rayleigh_cfg, tmp_path, capsys):
        out = tmp_path / "rzz.csv"
        assert cli_dispatch(
            ["theory", "--kind", "rzz", "--config", str(rayleigh_cfg), "--out", str(out)]
        ) == 0
        capsys.readouterr()
        cols, rows = read_series_csv(out)
        assert cols == ["lag_s", "fd_tau", "value_re", "value_im"]
        assert rows[0, 2] == pytest.approx(1.0)
        assert rows[0, 3] == 0.0

    def test_acf_rxx_matches_oracle_column(self, small_cfg, tmp_path, capsys):
        out = tmp_path / "acf.csv"
        assert cli_dispatch(
            ["acf", "--kind", "rxx", "--config", str(small_cfg), "--out", str(out)]
        ) == 0
        capsys.readouterr()
        cols, rows = read_series_csv(out)
        assert cols == ["lag_s", "fd_tau", "value", "oracle_value"]
        assert np.abs(rows[:, 2] - rows[:, 3]).max() <= 0.05

    def test_gen_writes_one_file_per_trial(self, tmp_path, capsys):
        cfg = tmp_path / "gen.cfg"
        cfg.write_text("k = 1\nn_trials = 4\nn_samples = 64\nseed = 11\n")
        out_dir = tmp_path / "traces"
        assert cli_dispatch(["gen", "--config", str(cfg), "--out", str(out_dir)]) == 0
        capsys.readouterr()
        files = sorted(out_dir.iterdir())
        assert len(files) == 4
        trace = read_trace(files[2])
        assert trace.trial_index == 2
        assert trace.samples.size == 64

    def test_gen_seed_override(self, tmp_path, capsys):
        cfg = tmp_path / "gen.cfg"
        cfg.write_text("k = 1\nn_trials = 1\nn_samples = 32\nseed = 11\n")
        d1, d2 = tmp_path / "a", tmp_path / "b"
        assert cli_dispatch(["gen", "--config", str(cfg), "--out", str(d1), "--seed", "99"]) == 0
        assert cli_dispatch(["gen", "--config", str(cfg), "--out", str(d2), "--seed", "99"]) == 0
        capsys.readouterr()
        a = (d1 / "trace_00000.twdptrc").read_bytes()
        b = (d2 / "trace_00000.twdptrc").read_bytes()
        assert a == b
        assert read_trace(d1 / "trace_00000.twdptrc").seed == 99

    def test_pdf_emits_density_table(self, tmp_path, capsys):
        cfg = tmp_path / "pdf.cfg"
        cfg.write_text("k = 10\ngamma = 1\nn_trials = 100\nn_samples = 2001\nseed = 2\n")
        out = tmp_path / "pdf.csv"
        assert cli_dispatch(["pdf", "--config", str(cfg), "--out", str(out)]) == 0
        capsys.readouterr()
        cols, rows = read_series_csv(out)
        assert cols == ["bin_left", "bin_right", "density", "oracle_density"]
        widths = rows[:, 1] - rows[:, 0]
        assert np.sum(rows[:, 2] * widths) == pytest.approx(1.0, abs=1e-12)

    def test_lcr_rayleigh_has_oracle_column(self, tmp_path, capsys):
        cfg = tmp_path / "lcr.cfg"
        cfg.write_text("k = 0\nn_trials = 50\nn_samples = 2001\nseed = 6\n")
        out = tmp_path / "lcr.csv"
        assert cli_dispatch(["lcr", "--config", str(cfg), "--out", str(out)]) == 0
        capsys.readouterr()
        cols, rows = read_series_csv(out)
        assert cols == ["rho", "rate", "oracle_rate"]
        assert np.all(rows[:, 1] >= 0)

    def test_lcr_twdp_has_no_oracle_column(self, tmp_path, capsys):
        cfg = tmp_path / "lcr2.cfg"
        cfg.write_text("k = 10\ngamma = 1\nn_trials = 20\nn_samples = 1001\nseed = 6\n")
        out = tmp_path / "lcr2.csv"
        assert cli_dispatch(["lcr", "--config", str(cfg), "--out", str(out)]) == 0
        capsys.readouterr()
        cols, _ = read_series_csv(out)
        assert cols == ["rho", "rate"]

    def test_json_format(self, rayleigh_cfg, tmp_path, capsys):
        out = tmp_path / "rsq.json"
        assert cli_dispatch(
            ["theory", "--kind", "rsq", "--model", "simulator", "--format", "json",
             "--config", str(rayleigh_cfg), "--out", str(out)]
        ) == 0
        capsys.readouterr()
        doc = json.loads(out.read_text())
        assert doc["columns"] == ["lag_s", "fd_tau", "value"]
        assert abs(doc["rows"][0][2] - 1.875) < 1e-12


class TestValidateCommand:
    def test_deterministic_reports_and_exit_zero(self, small_cfg, tmp_path, capsys):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        code1 = cli_dispatch(
            ["validate", "--config", str(small_cfg), "--seed", "7", "--out", str(out1)]
        )
        code2 = cli_dispatch(
            ["validate", "--config", str(small_cfg), "--seed", "7", "--out", str(out2)]
        )
        capsys.readouterr()
        assert code1 == 0 and code2 == 0
        assert out1.read_bytes() == out2.read_bytes()
        doc = json.loads(out1.read_text())
        assert doc["overall_passed"] is True
        assert len(doc["records"]) == 5

    def test_noisy_scenario_fails_with_exit_one(self, tmp_path, capsys):
        cfg = tmp_path / "noisy.cfg"
        cfg.write_text("k = 0\nn_trials = 2\nn_samples = 1200\nseed = 4\n")
        out = tmp_path / "r.json"
        code = cli_dispatch(["validate", "--config", str(cfg), "--out", str(out)])
        capsys.readouterr()
        assert code == 1
        assert json.loads(out.read_text())["overall_passed"] is False

"""End-to-end tests of the command-line interface (subprocess level)."""

import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from ofdmsim.metrics import CSV_COLUMNS

SMALL_CONFIG = {
    "fft_sizes": [64, 128],
    "cp_fractions": ["1/4", "1/16"],
    "ebno_points_db": [0, 6],
    "channel": "awgn",
    "master_seed": 99,
    "max_bits_per_cell": 24_000,
    "target_errors": 30,
    "bit_budget": 3000,
}


def run_cli(*args, env_extra=None, timeout=300):
    import os

    env = dict(os.environ)
    env.pop("OFDMSIM_WORKERS", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "ofdmsim", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=timeout,
    )


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(SMALL_CONFIG))
    return path


class TestSweepCommand:
    def test_writes_csv_and_plots(self, config_path, tmp_path):
        out = tmp_path / "results.csv"
        plots = tmp_path / "plots"
        result = run_cli(
            "sweep", "--config", str(config_path), "--out", str(out),
            "--plots", str(plots), "--json-out", str(tmp_path / "results.json"),
        )
        assert result.returncode == 0, result.stderr
        assert "effective config" in result.stderr
        lines = out.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + 2 * 2 * 2
        svgs = sorted(p.name for p in plots.iterdir())
        assert svgs == ["ber_fft128.svg", "ber_fft64.svg"]
        for p in plots.iterdir():
            ET.parse(p)

    def test_byte_identical_across_worker_counts(self, config_path, tmp_path):
        outputs = []
        for workers, name in (("1", "a.csv"), ("3", "b.csv")):
            out = tmp_path / name
            result = run_cli(
                "sweep", "--config", str(config_path), "--out", str(out),
                env_extra={"OFDMSIM_WORKERS": workers},
            )
            assert result.returncode == 0, result.stderr
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_flag_overrides_beat_config_file(self, config_path, tmp_path):
        out = tmp_path / "results.csv"
        result = run_cli(
            "sweep", "--config", str(config_path), "--out", str(out),
            "--fft-sizes", "64", "--ebno", "6",
        )
        assert result.returncode == 0, result.stderr
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 1 * 2 * 1
        assert all(line.startswith("64,") for line in lines[1:])

    def test_missing_config_exits_2(self, tmp_path):
        result = run_cli("sweep", "--config", str(tmp_path / "absent.json"))
        assert result.returncode == 2
        assert "absent.json" in result.stderr

    def test_invalid_cp_exits_2(self, config_path, tmp_path):
        result = run_cli(
            "sweep", "--config", str(config_path),
            "--out", str(tmp_path / "x.csv"), "--cp-fractions", "1/3",
        )
        assert result.returncode == 2

    def test_unknown_config_key_exits_2(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"fft_size": [64]}))
        result = run_cli("sweep", "--config", str(path))
        assert result.returncode == 2
        assert "fft_size" in result.stderr

    def test_unwritable_output_exits_3(self, config_path, tmp_path):
        result = run_cli(
            "sweep", "--config", str(config_path),
            "--out", str(tmp_path / "missing_dir" / "x.csv"),
        )
        assert result.returncode == 3

    def test_unknown_flag_is_a_hard_error(self, config_path):
        result = run_cli("sweep", "--config", str(config_path), "--frobnicate")
        assert result.returncode == 2

    def test_help_lists_the_flags(self):
        result = run_cli("sweep", "--help")
        assert result.returncode == 0
        for flag in ("--config", "--seed", "--cp-fractions", "--no-equalizer",
                     "--report-snr", "--workers", "--plots"):
            assert flag in result.stdout

    def test_report_snr_goes_to_stderr(self, config_path, tmp_path):
        result = run_cli(
            "sweep", "--config", str(config_path),
            "--out", str(tmp_path / "r.csv"), "--report-snr",
        )
        assert result.returncode == 0
        assert "sample_snr_db=" in result.stderr


class TestSingleCommand:
    def test_emits_one_json_record(self):
        result = run_cli(
            "single", "--fft", "512", "--cp", "1/4", "--channel", "awgn",
            "--ebno", "10", "--seed", "7", "--max-bits", "30000",
            "--target-errors", "20", "--bit-budget", "3000",
        )
        assert result.returncode == 0, result.stderr
        record = json.loads(result.stdout)
        assert set(record) == set(CSV_COLUMNS) | {"equalizer"}
        assert record["fft_size"] == 512
        assert record["cp_fraction"] == "1/4"
        assert record["seed"] == 7
        assert record["equalizer"] == "zf"

    def test_report_snr_adds_the_key(self):
        result = run_cli(
            "single", "--fft", "64", "--cp", "0", "--channel", "awgn",
            "--ebno", "10", "--max-bits", "6000", "--target-errors", "5",
            "--bit-budget", "3000", "--report-snr",
        )
        assert result.returncode == 0, result.stderr
        record = json.loads(result.stdout)
        # Es=1, b=3: per-sample SNR is Eb/No + 10*log10(3)
        assert record["sample_snr_db"] == pytest.approx(10 + 10 * np.log10(3), abs=1e-9)

    def test_non_integer_cp_exits_2(self):
        result = run_cli("single", "--fft", "64", "--cp", "1/3",
                         "--channel", "awgn", "--ebno", "10")
        assert result.returncode == 2

    def test_no_equalizer_is_echoed(self):
        result = run_cli(
            "single", "--fft", "64", "--cp", "1/4", "--channel", "flat",
            "--ebno", "10", "--no-equalizer", "--max-bits", "12000",
            "--target-errors", "10", "--bit-budget", "3000",
        )
        assert result.returncode == 0, result.stderr
        record = json.loads(result.stdout)
        assert record["equalizer"] == "none"
        assert record["channel"].endswith("/noeq")

    def test_tdl_taps_are_normalized(self):
        result = run_cli(
            "single", "--fft", "64", "--cp", "1/4", "--channel", "tdl",
            "--tdl-taps", "2,1,1", "--ebno", "300", "--max-bits", "6000",
            "--target-errors", "1", "--bit-budget", "3000",
        )
        assert result.returncode == 0, result.stderr
        record = json.loads(result.stdout)
        assert record["channel"] == "tdl:0.5;0.25;0.25"
        assert record["bit_errors"] == 0


class TestValidateCommand:
    def test_miscalibrated_noise_fails(self):
        result = run_cli("validate", "--bits", "60000", "--noise-scale", "2.0")
        assert result.returncode == 1
        assert "FAIL" in result.stdout
        assert "validation FAILED" in result.stdout

    def test_healthy_build_passes(self):
        result = run_cli("validate", "--bits", "400000")
        assert result.returncode == 0, result.stdout
        assert "validation PASSED" in result.stdout
        # one row per theory point plus the transparency and identity rows
        assert result.stdout.count("awgn-theory") == 3
        assert result.stdout.count("ofdm-transparency") == 6


class TestPlotCommand:
    def test_regenerates_charts_from_csv(self, config_path, tmp_path):
        out = tmp_path / "results.csv"
        assert run_cli("sweep", "--config", str(config_path), "--out", str(out)).returncode == 0
        result = run_cli("plot", "--records", str(out), "--out-dir", str(tmp_path / "charts"))
        assert result.returncode == 0, result.stderr
        names = sorted(p.name for p in (tmp_path / "charts").iterdir())
        assert names == ["ber_fft128.svg", "ber_fft64.svg"]

"""CLI behavior: output records, exit codes, file outputs, overrides."""

import io
import json
import os
from contextlib import redirect_stderr, redirect_stdout

import pytest

from irsmec.cli import main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as e:
            code = e.code if e.code is not None else 0
    return code, out.getvalue(), err.getvalue()


def record(text):
    pairs = {}
    for line in text.splitlines():
        if " = " in line:
            k, v = line.split(" = ", 1)
            pairs[k] = v
    return pairs


class TestLink:
    def test_default_separation_200(self):
        code, out, err = run_cli("link", "--separation", "200e0")
        assert code == 0 and err == ""
        rec = record(out)
        assert rec["mode"] == "direct"
        assert float(rec["throughput_bps"]) == pytest.approx(2.001e6, rel=1e-9)
        assert float(rec["received_power_w"]) == pytest.approx(1.1048543456039805e-12,
                                                               rel=1e-12)
        assert float(rec["snr_db"]) == pytest.approx(4.775225816965981, rel=1e-9)

    def test_zero_tx_power_is_validation_error(self):
        code, out, err = run_cli("link", "--tx-power", "0")
        assert code == 1
        assert err.startswith("error:") and err.count("\n") == 1

    def test_irs_beats_direct(self):
        _, out_direct, _ = run_cli("link")
        _, out_irs, _ = run_cli("link", "--irs")
        direct = float(record(out_direct)["throughput_bps"])
        assisted = float(record(out_irs)["throughput_bps"])
        assert assisted > direct

    def test_json_output(self):
        code, out, _ = run_cli("link", "--json")
        assert code == 0
        obj = json.loads(out)
        assert obj["mode"] == "direct"
        assert obj["throughput_bps"] == pytest.approx(2.001e6, rel=1e-9)

    def test_mc_sampling(self):
        code, out, _ = run_cli("link", "--mc-samples", "2000", "--seed", "9")
        rec = record(out)
        assert code == 0
        assert float(rec["mc_mean_throughput_bps"]) < float(rec["throughput_bps"])
        assert int(rec["mc_samples"]) == 2000
        # same seed reproduces bit-identically
        _, out2, _ = run_cli("link", "--mc-samples", "2000", "--seed", "9")
        assert out == out2


class TestOffload:
    def test_explicit_rate(self):
        code, out, _ = run_cli("offload", "--data-bytes", "6000",
                               "--rate-bps", "2.001e6")
        rec = record(out)
        assert code == 0
        assert float(rec["total_s"]) == pytest.approx(0.0299880059970015, rel=1e-12)
        assert rec["within_deadline"] == "true"

    def test_link_budget_rate(self):
        code, out, _ = run_cli("offload", "--data-bytes", "6000")
        rec = record(out)
        assert code == 0
        assert float(rec["rate_bps"]) == pytest.approx(2.001e6, rel=1e-9)

    def test_zero_rate_rejected(self):
        code, _, err = run_cli("offload", "--data-bytes", "6000", "--rate-bps", "0")
        assert code == 1 and err.startswith("error:")


class TestCalibrate:
    def test_defaults(self):
        code, out, _ = run_cli("calibrate")
        assert code == 0
        assert "interference_power_w = 3.679446109611075e-13" in out
        assert 'gain_interpretation = "linear"' in out
        assert "[environment]" in out and "[irs]" in out

    def test_fragment_is_loadable_config(self, tmp_path):
        _, out, _ = run_cli("calibrate")
        cfg = tmp_path / "calib.toml"
        cfg.write_text(out)
        code, out2, _ = run_cli("link", "--config", str(cfg), "--separation", "200")
        assert code == 0
        assert float(record(out2)["throughput_bps"]) == pytest.approx(2.001e6, rel=1e-9)

    def test_round_trip_by_construction(self):
        _, out, _ = run_cli("calibrate", "--json")
        noise = json.loads(out)["interference_power_w"]
        code, out2, _ = run_cli(
            "link", "--separation", "200",
            "--set", f"environment.interference_power_w={noise}")
        assert float(record(out2)["throughput_bps"]) == pytest.approx(2.001e6, rel=1e-9)

    def test_zero_anchor_rate(self):
        code, _, err = run_cli("calibrate", "--anchor-rate", "0")
        assert code == 1 and err.startswith("error:")

    def test_no_gain_selection(self):
        code, out, _ = run_cli("calibrate", "--no-gain-selection")
        assert code == 0
        assert "gain_interpretation" not in out


class TestFigure:
    def test_single_figure(self, tmp_path):
        code, out, _ = run_cli("figure", "--id", "2", "--out", str(tmp_path))
        assert code == 0
        assert "rows=183" in out
        lines = (tmp_path / "fig2.csv").read_text().splitlines()
        assert lines[1] == "data_bytes,cpu_hz,latency_s,deadline_s"
        assert len([l for l in lines if not l.startswith("#")]) == 184

    def test_all_figures(self, tmp_path):
        code, out, _ = run_cli("figure", "--id", "all", "--out", str(tmp_path))
        assert code == 0
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == [f"fig{i}.csv" for i in range(2, 10)]

    def test_invalid_id_is_usage_error(self, tmp_path):
        code, _, err = run_cli("figure", "--id", "11", "--out", str(tmp_path))
        assert code == 2

    def test_unwritable_dir(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code, _, err = run_cli("figure", "--id", "2", "--out", str(blocker / "sub"))
        assert code == 1 and err.startswith("error:")

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        run_cli("figure", "--id", "all", "--out", str(a))
        run_cli("figure", "--id", "all", "--out", str(b))
        for i in range(2, 10):
            assert (a / f"fig{i}.csv").read_bytes() == (b / f"fig{i}.csv").read_bytes()


class TestSweep:
    def test_bandwidth_sweep_stdout(self):
        code, out, _ = run_cli("sweep", "--variable", "bandwidth_hz", "--start", "1e6",
                               "--stop", "1e7", "--step", "1e6", "--metric", "throughput")
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "bandwidth_hz,throughput_noirs_bps,throughput_irs_bps"
        assert len(lines) == 12  # comment + header + 10 points

    def test_offload_sweep_to_file(self, tmp_path):
        path = tmp_path / "sweep.csv"
        code, out, _ = run_cli("sweep", "--variable", "data_bytes", "--start", "5000",
                               "--stop", "20000", "--step", "500", "--out", str(path))
        assert code == 0 and "rows=31" in out
        assert path.read_text().splitlines()[1] == (
            "data_bytes,latency_noirs_s,latency_irs_s,deadline_s")

    def test_local_metric_requires_data_variable(self):
        code, _, err = run_cli("sweep", "--variable", "bandwidth_hz", "--start", "1e6",
                               "--stop", "2e6", "--step", "1e6", "--metric", "local")
        assert code == 1 and err.startswith("error:")


class TestHeadline:
    def test_stdout_record(self):
        code, out, _ = run_cli("headline", "--set", "irs.gain_interpretation=linear")
        rec = record(out)
        assert code == 0
        assert rec["gain_interpretation"] == "linear"
        assert float(rec["power_reduction"]) == 0.4
        assert float(rec["throughput_gain"]) == pytest.approx(5.0897, rel=1e-4)

    def test_csv_output(self, tmp_path):
        code, out, _ = run_cli("headline", "--out", str(tmp_path))
        assert code == 0
        lines = (tmp_path / "headline.csv").read_text().splitlines()
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "metric,model_value,paper_value"


class TestPlumbing:
    def test_help_on_every_subcommand(self):
        for sub in ("link", "offload", "calibrate", "figure", "sweep", "headline"):
            code, out, _ = run_cli(sub, "--help")
            assert code == 0
            assert "--config" in out

    def test_unknown_subcommand(self):
        code, _, _ = run_cli("nonsense")
        assert code == 2

    def test_set_override(self):
        code, out, _ = run_cli("link", "--set", "direct.tx_power_w=10.0")
        assert code == 0
        assert float(record(out)["received_power_w"]) == pytest.approx(
            2 * 1.1048543456039805e-12, rel=1e-12)

    def test_bad_set_value(self):
        code, _, err = run_cli("link", "--set", "direct.tx_power_w=-1")
        assert code == 1 and err.startswith("error:")

    def test_config_env_var(self, tmp_path, monkeypatch):
        cfg = tmp_path / "base.toml"
        cfg.write_text("[direct]\ntx_power_w = 10.0\n")
        monkeypatch.setenv("IRS_MEC_CONFIG", str(cfg))
        code, out, _ = run_cli("link")
        assert code == 0
        assert float(record(out)["received_power_w"]) == pytest.approx(
            2 * 1.1048543456039805e-12, rel=1e-12)

    def test_json_config(self, tmp_path):
        cfg = tmp_path / "base.json"
        cfg.write_text('{"direct": {"tx_power_w": 10.0}}')
        code, out, _ = run_cli("link", "--config", str(cfg))
        assert code == 0
        assert float(record(out)["received_power_w"]) == pytest.approx(
            2 * 1.1048543456039805e-12, rel=1e-12)

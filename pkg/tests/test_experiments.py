"""Figure dataset and headline report tests, including the independent
straight-line re-evaluation of the bulk paths."""

import math

import pytest

from irsmec.errors import DomainError
from irsmec.experiments import (FIGURE_COLUMNS, FIGURE_IDS, dataset_csv, headline_csv,
                                headline_report, run_all_figures, run_figure,
                                write_figure_csv)
from irsmec.scenario import default_scenario


@pytest.fixture(scope="module")
def scenario():
    return default_scenario()


@pytest.fixture(scope="module")
def calibrated(scenario):
    # the gain reading selected by calibrate mode against the reflected anchor
    return scenario.with_overrides({"irs.gain_interpretation": "linear"})


def rows_by(ds, *cols):
    idx = [ds.columns.index(c) for c in cols]
    return [tuple(r[i] for i in idx) for r in ds.rows]


class TestFigure2:
    def test_shape_and_sorting(self, scenario):
        ds = run_figure(2, scenario)
        assert ds.columns == ("data_bytes", "cpu_hz", "latency_s", "deadline_s")
        assert len(ds.rows) == 61 * 3
        data = [r[0] for r in ds.rows]
        assert data == sorted(data)

    def test_threshold_reading(self, scenario):
        ds = run_figure(2, scenario)
        wanted = [r for r in ds.rows if r[0] == 7500.0 and r[1] == 2e9]
        assert len(wanted) == 1
        assert wanted[0][2] == pytest.approx(0.030, rel=1e-12)

    def test_deadline_column_constant(self, scenario):
        ds = run_figure(2, scenario)
        assert all(r[3] == 0.030 for r in ds.rows)

    def test_latency_increases_with_data(self, scenario):
        ds = run_figure(2, scenario)
        for cpu in (2e9, 3e9, 4e9):
            series = [r[2] for r in ds.rows if r[1] == cpu]
            assert all(a < b for a, b in zip(series, series[1:]))


class TestFigures345:
    @pytest.mark.parametrize("fid,data", [(3, 6000.0), (4, 17000.0), (5, 20000.0)])
    def test_shape(self, scenario, fid, data):
        ds = run_figure(fid, scenario)
        assert ds.columns == ("bandwidth_hz", "latency_noirs_s", "latency_irs_s", "deadline_s")
        assert len(ds.rows) == 37
        bw = [r[0] for r in ds.rows]
        assert bw == sorted(bw) and bw[0] == 1e6 and bw[-1] == 10e6

    @pytest.mark.parametrize("fid", [3, 4, 5])
    def test_irs_is_never_slower(self, scenario, fid):
        ds = run_figure(fid, scenario)
        assert all(r[2] <= r[1] for r in ds.rows)

    @pytest.mark.parametrize("fid", [3, 4, 5])
    def test_latency_non_increasing_in_bandwidth(self, scenario, fid):
        ds = run_figure(fid, scenario)
        for col in (1, 2):
            series = [r[col] for r in ds.rows]
            assert all(a >= b for a, b in zip(series, series[1:]))

    def test_fig3_feasibility_boundary(self, scenario):
        ds = run_figure(3, scenario)
        at_1mhz = [r for r in ds.rows if r[0] == 1e6][0]
        assert at_1mhz[1] <= 0.030  # 6000 B fit at minimal bandwidth


class TestThroughputSurfaces:
    def test_fig6_shape_and_anchors(self, scenario):
        ds = run_figure(6, scenario)
        assert ds.columns == ("bandwidth_hz", "separation_m", "throughput_bps")
        assert len(ds.rows) == 37 * 39
        lookup = {(r[0], r[1]): r[2] for r in ds.rows}
        assert lookup[(1e6, 200.0)] == pytest.approx(2.001e6, rel=1e-9)
        assert lookup[(5e6, 200.0)] == pytest.approx(10.01e6, rel=1e-3)
        assert lookup[(10e6, 200.0)] == pytest.approx(20.01e6, rel=1e-3)

    def test_fig6_monotone(self, scenario):
        ds = run_figure(6, scenario)
        lookup = {(r[0], r[1]): r[2] for r in ds.rows}
        seps = sorted({r[1] for r in ds.rows})
        bws = sorted({r[0] for r in ds.rows})
        for s in seps:
            series = [lookup[(b, s)] for b in bws]
            assert all(a < b for a, b in zip(series, series[1:]))
        for b in bws:
            series = [lookup[(b, s)] for s in seps]
            assert all(a > b for a, b in zip(series, series[1:]))

    def test_fig8_anchor_under_calibrated_gains(self, calibrated):
        ds = run_figure(8, calibrated)
        assert ds.meta["separation_split"] == "d1=d2=separation/2"
        lookup = {(r[0], r[1]): r[2] for r in ds.rows}
        assert lookup[(1e6, 200.0)] == pytest.approx(10.53e6, rel=0.10)
        assert lookup[(1e6, 200.0)] == pytest.approx(10184535.162443364, rel=1e-9)

    def test_fig8_beats_fig6_pointwise(self, scenario):
        direct = {(r[0], r[1]): r[2] for r in run_figure(6, scenario).rows}
        assisted = {(r[0], r[1]): r[2] for r in run_figure(8, scenario).rows}
        assert all(assisted[k] > v for k, v in direct.items())


class TestLatencySurfaces:
    @pytest.mark.parametrize("fid", [7, 9])
    def test_shape(self, scenario, fid):
        ds = run_figure(fid, scenario)
        assert ds.columns == ("bandwidth_hz", "data_bytes", "latency_s", "deadline_s")
        assert len(ds.rows) == 37 * 61

    def test_fig9_below_fig7(self, scenario):
        f7 = {(r[0], r[1]): r[2] for r in run_figure(7, scenario).rows}
        f9 = {(r[0], r[1]): r[2] for r in run_figure(9, scenario).rows}
        assert all(f9[k] < v for k, v in f7.items())

    def test_monotone_in_both_axes(self, scenario):
        ds = run_figure(7, scenario)
        lookup = {(r[0], r[1]): r[2] for r in ds.rows}
        bws = sorted({r[0] for r in ds.rows})
        datas = sorted({r[1] for r in ds.rows})
        for d in datas:
            series = [lookup[(b, d)] for b in bws]
            assert all(a > b for a, b in zip(series, series[1:]))
        for b in bws:
            series = [lookup[(b, d)] for d in datas]
            assert all(a < b for a, b in zip(series, series[1:]))


class TestBruteForceEquivalence:
    def test_straight_line_re_evaluation(self, scenario):
        """Independent loop over the (bandwidth, payload) grid at 1e-12."""
        ds = run_figure(7, scenario)
        assert len(ds.rows) <= 10**4
        p_t, d_m = scenario.direct.tx_power_w, scenario.direct.distance_m
        h = scenario.direct.fading_coeff
        alpha = scenario.environment.path_loss_exponent
        noise = scenario.environment.interference_power_w
        free = scenario.mec.free_hz
        cpb = scenario.cycles_per_bit
        for bandwidth, data, latency, _ in ds.rows:
            power = p_t * h / d_m ** alpha
            rate = bandwidth * math.log2(1.0 + power / noise)
            bits = data * 8.0
            expected = bits / rate + bits * cpb / free
            assert latency == pytest.approx(expected, rel=1e-12)

    def test_straight_line_throughput_surface(self, scenario):
        ds = run_figure(6, scenario)
        assert len(ds.rows) <= 10**4
        p_t = scenario.direct.tx_power_w
        h = scenario.direct.fading_coeff
        alpha = scenario.environment.path_loss_exponent
        noise = scenario.environment.interference_power_w
        for bandwidth, sep, thr in ds.rows:
            expected = bandwidth * math.log2(1.0 + (p_t * h / sep ** alpha) / noise)
            assert thr == pytest.approx(expected, rel=1e-12)


class TestHeadline:
    def test_report_under_calibrated_gains(self, calibrated):
        report = headline_report(calibrated)
        values = {m: (mv, pv) for m, mv, pv in report.rows}
        assert report.gain_interpretation == "linear"

        model, paper = values["throughput_gain"]
        assert paper == 5.0
        assert model == pytest.approx(5.0897227198617506, rel=1e-9)
        assert abs(model - 5.0) / 5.0 < 0.10

        model, paper = values["bandwidth_requirement_ratio"]
        assert paper == 4.0
        assert abs(model - 4.0) / 4.0 < 0.15

        model, paper = values["power_reduction"]
        assert model == 0.40 and paper == 0.40

        assert values["min_bandwidth_noirs_20000bytes_hz"][0] == pytest.approx(
            7996001.999000501, rel=1e-9)
        assert values["min_bandwidth_irs_20000bytes_hz"][0] == pytest.approx(
            1571009.3533774451, rel=1e-9)

        for mhz, ref in ((1, 10.53e6), (5, 52.63e6), (10, 105.3e6)):
            model, paper = values[f"throughput_irs_{mhz}mhz_bps"]
            assert paper == ref
            assert abs(model - ref) / ref < 0.10

    def test_noirs_triple(self, scenario):
        report = headline_report(scenario)
        values = {m: (mv, pv) for m, mv, pv in report.rows}
        assert values["throughput_noirs_1mhz_bps"][0] == pytest.approx(2.001e6, rel=1e-9)
        assert values["throughput_noirs_5mhz_bps"][0] == pytest.approx(10.01e6, rel=1e-3)
        assert values["throughput_noirs_10mhz_bps"][0] == pytest.approx(20.01e6, rel=1e-3)

    def test_csv_schema(self, calibrated):
        text = headline_csv(headline_report(calibrated))
        lines = text.splitlines()
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "metric,model_value,paper_value"


class TestCsvOutput:
    def test_headers_match_contract(self, scenario):
        for fid in FIGURE_IDS:
            ds = run_figure(fid, scenario)
            text = dataset_csv(ds)
            lines = text.splitlines()
            assert lines[0] == f"# scenario_fingerprint = {scenario.fingerprint}"
            header = next(l for l in lines if not l.startswith("#"))
            assert header == ",".join(FIGURE_COLUMNS[fid])

    def test_deterministic_bytes(self, scenario):
        for fid in (2, 6, 8):
            a = dataset_csv(run_figure(fid, scenario))
            b = dataset_csv(run_figure(fid, default_scenario()))
            assert a == b

    def test_write_and_run_all(self, scenario, tmp_path):
        written = run_all_figures(scenario, str(tmp_path))
        assert [fid for fid, _, _ in written] == list(FIGURE_IDS)
        assert sorted(p.name for p in tmp_path.iterdir()) == [
            f"fig{i}.csv" for i in FIGURE_IDS]
        fid, path, n = written[0]
        assert n == 183
        ds = run_figure(2, scenario)
        assert open(path).read() == dataset_csv(ds)

    def test_invalid_figure_id(self, scenario):
        with pytest.raises(DomainError):
            run_figure(11, scenario)
        with pytest.raises(DomainError):
            run_figure(1, scenario)

"""Reproducible figure datasets and the headline comparison report.

Each dataset is a schema-stable CSV: fixed header per figure id, rows
sorted by the sweep variable, a scenario fingerprint in a leading comment
line so plots can assert provenance. Identical scenarios produce
byte-identical files.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .core import (min_bandwidth_for_deadline, received_power_direct, received_power_irs,
                   snr, throughput)
from .errors import DomainError
from .model import ComputeTask, IrsLink
from .scenario import Scenario

FIGURE_IDS = (2, 3, 4, 5, 6, 7, 8, 9)

FIGURE_COLUMNS: dict[int, tuple[str, ...]] = {
    2: ("data_bytes", "cpu_hz", "latency_s", "deadline_s"),
    3: ("bandwidth_hz", "latency_noirs_s", "latency_irs_s", "deadline_s"),
    4: ("bandwidth_hz", "latency_noirs_s", "latency_irs_s", "deadline_s"),
    5: ("bandwidth_hz", "latency_noirs_s", "latency_irs_s", "deadline_s"),
    6: ("bandwidth_hz", "separation_m", "throughput_bps"),
    7: ("bandwidth_hz", "data_bytes", "latency_s", "deadline_s"),
    8: ("bandwidth_hz", "separation_m", "throughput_bps"),
    9: ("bandwidth_hz", "data_bytes", "latency_s", "deadline_s"),
}

HEADLINE_COLUMNS = ("metric", "model_value", "paper_value")

# Fixed payload for the three latency-vs-bandwidth datasets.
FIGURE_FIXED_DATA_BYTES = {3: 6000.0, 4: 17000.0, 5: 20000.0}

# Quoted reference readings the headline report compares against.
PAPER_THROUGHPUT_NOIRS_BPS = {1e6: 2.001e6, 5e6: 10.01e6, 10e6: 20.01e6}
PAPER_THROUGHPUT_IRS_BPS = {1e6: 10.53e6, 5e6: 52.63e6, 10e6: 105.3e6}
PAPER_THROUGHPUT_GAIN = 5.0
PAPER_MIN_BANDWIDTH_NOIRS_HZ = 8e6
PAPER_MIN_BANDWIDTH_IRS_HZ = 2e6
PAPER_BANDWIDTH_RATIO = 4.0
PAPER_POWER_REDUCTION = 0.40
HEADLINE_DATA_BYTES = 20000.0

# Bandwidth-axis resolution at which the reference bandwidth requirements are
# quoted; minimum bandwidths are rounded up to this grid before the ratio.
BANDWIDTH_READOUT_STEP_HZ = 1e6


@dataclass(frozen=True)
class FigureDataset:
    figure_id: int
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    meta: Mapping[str, str]


def _snr_noirs(scenario: Scenario) -> float:
    return snr(received_power_direct(scenario.direct, scenario.environment),
               scenario.environment)


def _snr_irs(scenario: Scenario) -> float:
    return snr(received_power_irs(scenario.irs, scenario.environment), scenario.environment)


def _irs_distance_free_numerator(scenario: Scenario) -> float:
    """Budget numerator with the (d1*d2)^2 term divided out, for row kernels."""
    at_unit = IrsLink(
        tx_power_w=scenario.irs.tx_power_w,
        bandwidth_hz=scenario.irs.bandwidth_hz,
        tx_gain=scenario.irs.tx_gain,
        rx_gain=scenario.irs.rx_gain,
        theta_t_rad=scenario.irs.theta_t_rad,
        theta_r_rad=scenario.irs.theta_r_rad,
        d1_m=1.0,
        d2_m=1.0,
        panel=scenario.irs.panel,
    )
    return received_power_irs(at_unit, scenario.environment) * 64.0 * math.pi ** 3


def run_figure(figure_id: int, scenario: Scenario) -> FigureDataset:
    """Evaluate one figure dataset on the scenario's sweep grids."""
    if figure_id not in FIGURE_IDS:
        raise DomainError(f"figure id must be in {FIGURE_IDS}, got {figure_id}")
    meta = {"scenario_fingerprint": scenario.fingerprint}
    deadline = scenario.deadline_s
    cpb = scenario.cycles_per_bit
    noise = scenario.environment.interference_power_w

    if figure_id == 2:
        data = np.asarray(scenario.data_grid)
        per_cpu = [kernels.local_latency_rows(data, cpb, cpu.free_hz)
                   for cpu in scenario.ue_cpus]
        rows = tuple(
            (float(d), cpu.total_hz, float(per_cpu[j][i]), deadline)
            for i, d in enumerate(data)
            for j, cpu in enumerate(scenario.ue_cpus)
        )
        return FigureDataset(figure_id, FIGURE_COLUMNS[2], rows, meta)

    if figure_id in (3, 4, 5):
        bw = np.asarray(scenario.bandwidth_grid)
        d = FIGURE_FIXED_DATA_BYTES[figure_id]
        data = np.full(bw.size, d)
        p_noirs = received_power_direct(scenario.direct, scenario.environment)
        p_irs = received_power_irs(scenario.irs, scenario.environment)
        rate_noirs = kernels.throughput_rows(bw, np.full(bw.size, p_noirs), noise)
        rate_irs = kernels.throughput_rows(bw, np.full(bw.size, p_irs), noise)
        lat_noirs = kernels.offload_latency_rows(data, rate_noirs, cpb, scenario.mec.free_hz)
        lat_irs = kernels.offload_latency_rows(data, rate_irs, cpb, scenario.mec.free_hz)
        rows = tuple(
            (float(bw[i]), float(lat_noirs[i]), float(lat_irs[i]), deadline)
            for i in range(bw.size)
        )
        return FigureDataset(figure_id, FIGURE_COLUMNS[figure_id], rows, meta)

    if figure_id in (6, 8):
        bw_grid = np.asarray(scenario.bandwidth_grid)
        sep_grid = np.asarray(scenario.separation_grid)
        bw = np.repeat(bw_grid, sep_grid.size)
        sep = np.tile(sep_grid, bw_grid.size)
        if figure_id == 6:
            power = kernels.power_direct_rows(
                sep, scenario.direct.tx_power_w, scenario.direct.fading_coeff,
                scenario.environment.path_loss_exponent)
        else:
            meta = dict(meta)
            meta["separation_split"] = "d1=d2=separation/2"
            half = sep / 2.0
            power = kernels.power_irs_rows(half, half,
                                           _irs_distance_free_numerator(scenario))
        thr = kernels.throughput_rows(bw, power, noise)
        rows = tuple(
            (float(bw[i]), float(sep[i]), float(thr[i])) for i in range(bw.size)
        )
        return FigureDataset(figure_id, FIGURE_COLUMNS[figure_id], rows, meta)

    # figures 7 and 9: latency surface over (bandwidth, payload)
    bw_grid = np.asarray(scenario.bandwidth_grid)
    data_grid = np.asarray(scenario.data_grid)
    bw = np.repeat(bw_grid, data_grid.size)
    data = np.tile(data_grid, bw_grid.size)
    if figure_id == 7:
        p = received_power_direct(scenario.direct, scenario.environment)
    else:
        p = received_power_irs(scenario.irs, scenario.environment)
    rate = kernels.throughput_rows(bw, np.full(bw.size, p), noise)
    lat = kernels.offload_latency_rows(data, rate, cpb, scenario.mec.free_hz)
    rows = tuple(
        (float(bw[i]), float(data[i]), float(lat[i]), deadline) for i in range(bw.size)
    )
    return FigureDataset(figure_id, FIGURE_COLUMNS[figure_id], rows, meta)


# ---------------------------------------------------------------------------
# headline report

@dataclass(frozen=True)
class HeadlineReport:
    rows: tuple[tuple[str, float, float], ...]
    gain_interpretation: str
    fingerprint: str


def _ceil_to_step(value: float, step: float) -> float:
    return math.ceil(value / step - 1e-9) * step


def headline_report(scenario: Scenario) -> HeadlineReport:
    """Model values next to the quoted claims: throughput gain, bandwidth
    requirement ratio for the largest payload, and transmit-power fraction.

    The bandwidth-requirement ratio is taken after rounding each minimum
    bandwidth up to the 1 MHz readout grid the claims are quoted on; the raw
    minima are reported alongside.
    """
    s_noirs = _snr_noirs(scenario)
    s_irs = _snr_irs(scenario)
    rows: list[tuple[str, float, float]] = []

    for b, ref in PAPER_THROUGHPUT_NOIRS_BPS.items():
        rows.append((f"throughput_noirs_{int(b / 1e6)}mhz_bps", throughput(b, s_noirs), ref))
    for b, ref in PAPER_THROUGHPUT_IRS_BPS.items():
        rows.append((f"throughput_irs_{int(b / 1e6)}mhz_bps", throughput(b, s_irs), ref))

    gain = throughput(1e6, s_irs) / throughput(1e6, s_noirs)
    rows.append(("throughput_gain", gain, PAPER_THROUGHPUT_GAIN))

    task = ComputeTask(data_bytes=HEADLINE_DATA_BYTES,
                       cycles_per_bit=scenario.cycles_per_bit,
                       deadline_s=scenario.deadline_s)
    b_noirs = min_bandwidth_for_deadline(task, s_noirs, scenario.mec)
    b_irs = min_bandwidth_for_deadline(task, s_irs, scenario.mec)
    rows.append(("min_bandwidth_noirs_20000bytes_hz", b_noirs, PAPER_MIN_BANDWIDTH_NOIRS_HZ))
    rows.append(("min_bandwidth_irs_20000bytes_hz", b_irs, PAPER_MIN_BANDWIDTH_IRS_HZ))
    ratio = (_ceil_to_step(b_noirs, BANDWIDTH_READOUT_STEP_HZ)
             / _ceil_to_step(b_irs, BANDWIDTH_READOUT_STEP_HZ))
    rows.append(("bandwidth_requirement_ratio", ratio, PAPER_BANDWIDTH_RATIO))

    rows.append(("power_reduction", scenario.irs.tx_power_w / scenario.direct.tx_power_w,
                 PAPER_POWER_REDUCTION))
    return HeadlineReport(tuple(rows), scenario.gain_interpretation, scenario.fingerprint)


# ---------------------------------------------------------------------------
# CSV output

def _fmt(value: float | str) -> str:
    if isinstance(value, str):
        return value
    return repr(float(value))


def dataset_csv(ds: FigureDataset) -> str:
    lines = [f"# scenario_fingerprint = {ds.meta['scenario_fingerprint']}"]
    for key in sorted(ds.meta):
        if key != "scenario_fingerprint":
            lines.append(f"# {key} = {ds.meta[key]}")
    lines.append(",".join(ds.columns))
    for row in ds.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def headline_csv(report: HeadlineReport) -> str:
    lines = [
        f"# scenario_fingerprint = {report.fingerprint}",
        f"# gain_interpretation = {report.gain_interpretation}",
        ",".join(HEADLINE_COLUMNS),
    ]
    for metric, model, paper in report.rows:
        lines.append(f"{metric},{_fmt(model)},{_fmt(paper)}")
    return "\n".join(lines) + "\n"


def write_figure_csv(ds: FigureDataset, out_dir: str) -> str:
    path = os.path.join(out_dir, f"fig{ds.figure_id}.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dataset_csv(ds))
    return path


def write_headline_csv(report: HeadlineReport, out_dir: str) -> str:
    path = os.path.join(out_dir, "headline.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(headline_csv(report))
    return path


def run_all_figures(scenario: Scenario, out_dir: str) -> list[tuple[int, str, int]]:
    """Write fig2.csv ... fig9.csv; returns (figure_id, path, data rows) per file."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for fid in FIGURE_IDS:
        ds = run_figure(fid, scenario)
        path = write_figure_csv(ds, out_dir)
        written.append((fid, path, len(ds.rows)))
    return written

"""Batch PNG renderer for the figure dataset CSVs.

The renderer plots CSV values untransformed (raw Hz, bytes, seconds), so
the arrays behind every artist equal the file contents exactly; the
returned :class:`RenderResult` exposes them for fidelity checks.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .schema import FIGURE_IDS, Dataset, SchemaError, read_dataset  # noqa: E402

LINE_FIGURES = (2, 3, 4, 5)
SURFACE_FIGURES = (6, 7, 8, 9)

_TITLES = {
    2: "Task completion time vs. data size (local processing)",
    3: "Task completion time vs. bandwidth (6000 B offload)",
    4: "Task completion time vs. bandwidth (17000 B offload)",
    5: "Task completion time vs. bandwidth (20000 B offload)",
    6: "Uplink throughput vs. bandwidth and separation (direct)",
    7: "Task completion time vs. bandwidth and data size (direct)",
    8: "Uplink throughput vs. bandwidth and separation (IRS-assisted)",
    9: "Task completion time vs. bandwidth and data size (IRS-assisted)",
}

_AXIS_LABELS = {
    "data_bytes": "data size (bytes)",
    "cpu_hz": "CPU frequency (Hz)",
    "latency_s": "task completion time (s)",
    "latency_noirs_s": "task completion time (s)",
    "bandwidth_hz": "bandwidth (Hz)",
    "separation_m": "separation (m)",
    "throughput_bps": "uplink throughput (b/s)",
}


@dataclass(frozen=True)
class PlotJob:
    figure_id: int
    csv_path: str
    out_path: str
    threshold_line: bool = True


@dataclass(frozen=True)
class RenderResult:
    figure_id: int
    out_path: str
    dataset: Dataset = field(repr=False)


def surface_grid(ds: Dataset) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reshape a (x, y, z) dataset to a complete rectangular grid."""
    x = ds.data[:, 0]
    y = ds.data[:, 1]
    z = ds.data[:, 2]
    xs = np.unique(x)
    ys = np.unique(y)
    if xs.size * ys.size != ds.data.shape[0]:
        raise SchemaError(
            f"fig{ds.figure_id}: rows do not form a complete {xs.size}x{ys.size} grid")
    order = np.lexsort((y, x))
    return xs, ys, z[order].reshape(xs.size, ys.size)


def _render_lines(ds: Dataset, job: PlotJob, ax) -> None:
    if ds.figure_id == 2:
        for cpu in np.unique(ds.column("cpu_hz")):
            mask = ds.column("cpu_hz") == cpu
            ax.plot(ds.column("data_bytes")[mask], ds.column("latency_s")[mask],
                    marker="", label=f"{cpu / 1e9:g} GHz CPU")
        ax.set_xlabel(_AXIS_LABELS["data_bytes"])
    else:
        bw = ds.column("bandwidth_hz")
        ax.plot(bw, ds.column("latency_noirs_s"), label="direct uplink")
        ax.plot(bw, ds.column("latency_irs_s"), label="IRS-assisted uplink")
        ax.set_xlabel(_AXIS_LABELS["bandwidth_hz"])
    if job.threshold_line:
        deadline = ds.column("deadline_s")[0]
        ax.axhline(deadline, color="red", linestyle="--", linewidth=1,
                   label=f"deadline {deadline:g} s")
    ax.set_ylabel(_AXIS_LABELS["latency_s"])
    ax.legend()
    ax.grid(True, alpha=0.3)


def _render_surface(ds: Dataset, fig) -> None:
    xs, ys, zz = surface_grid(ds)
    ax = fig.add_subplot(projection="3d")
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    ax.plot_surface(xg, yg, zz, cmap="viridis", linewidth=0, antialiased=True)
    ax.set_xlabel(_AXIS_LABELS[ds.columns[0]])
    ax.set_ylabel(_AXIS_LABELS[ds.columns[1]])
    ax.set_zlabel(_AXIS_LABELS[ds.columns[2]])


def render(job: PlotJob) -> RenderResult:
    """Validate one CSV and write its PNG."""
    ds = read_dataset(job.figure_id, job.csv_path)
    fig = plt.figure(figsize=(8, 6))
    try:
        if job.figure_id in LINE_FIGURES:
            _render_lines(ds, job, fig.add_subplot())
        else:
            _render_surface(ds, fig)
        title = _TITLES[job.figure_id]
        if "scenario_fingerprint" in ds.meta:
            title += f"\nscenario {ds.meta['scenario_fingerprint']}"
        fig.suptitle(title)
        fig.savefig(job.out_path, dpi=110)
    finally:
        plt.close(fig)
    return RenderResult(job.figure_id, job.out_path, ds)


def render_all(in_dir: str, out_dir: str,
               figure_ids: tuple[int, ...] = FIGURE_IDS) -> list[RenderResult]:
    """Render every requested figure; fails up front if any CSV is missing."""
    missing = [f"fig{fid}.csv" for fid in figure_ids
               if not os.path.exists(os.path.join(in_dir, f"fig{fid}.csv"))]
    if missing:
        raise FileNotFoundError(f"missing dataset files in {in_dir}: {', '.join(missing)}")
    os.makedirs(out_dir, exist_ok=True)
    return [
        render(PlotJob(fid, os.path.join(in_dir, f"fig{fid}.csv"),
                       os.path.join(out_dir, f"fig{fid}.png")))
        for fid in figure_ids
    ]

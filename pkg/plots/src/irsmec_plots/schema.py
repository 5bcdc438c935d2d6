"""The CSV contract this renderer consumes.

The headers below are pinned to the dataset producer's declared schemas;
any drift is rejected with a header diff rather than silently replotted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

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


class SchemaError(ValueError):
    """CSV does not match the declared dataset schema."""


@dataclass(frozen=True)
class Dataset:
    figure_id: int
    columns: tuple[str, ...]
    data: np.ndarray            # shape (rows, columns), float64
    meta: dict[str, str]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def read_dataset(figure_id: int, path: str) -> Dataset:
    """Parse and validate one dataset CSV.

    Leading ``# key = value`` comment lines become metadata; the header must
    equal the declared schema byte for byte; every row must parse as floats.
    """
    if figure_id not in FIGURE_COLUMNS:
        raise SchemaError(f"no schema for figure id {figure_id}")
    expected = FIGURE_COLUMNS[figure_id]

    meta: dict[str, str] = {}
    header: tuple[str, ...] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    k, v = body.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if header is None:
                header = tuple(line.split(","))
                if header != expected:
                    raise SchemaError(
                        f"{path}: header mismatch for fig{figure_id}: "
                        f"expected {','.join(expected)!r}, got {','.join(header)!r}")
                continue
            parts = line.split(",")
            if len(parts) != len(expected):
                raise SchemaError(
                    f"{path}:{lineno}: expected {len(expected)} fields, got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise SchemaError(f"{path}:{lineno}: non-numeric field") from None

    if header is None:
        raise SchemaError(f"{path}: missing header row")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return Dataset(figure_id, expected, np.asarray(rows, dtype=np.float64), meta)

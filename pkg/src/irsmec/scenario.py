"""Scenario ingestion: config grammar, defaults, validation, sweep grids.

The config is a small TOML document (JSON is accepted as an alternative)
with one canonical key per quantity. Key names carry explicit unit
suffixes (``_w``, ``_hz``, ``_ghz``, ``_m``, ``_db``, ``_deg``, ``_s``,
``_bytes``) and unknown keys are hard errors so unit typos cannot slip
through. Values are normalized to SI exactly once, at load.

The default scenario reproduces the reference measurement campaign:
5 W / 2 W transmit powers, 1-10 MHz bandwidth, 20 dB gains, a 100x100
panel of 3.8 mm elements at 120 GHz, 45 degree angles, path loss exponent
5.5, amplitude 0.9, 5000-20000 byte payloads at 1000 cycles/bit, 2-4 GHz
device CPUs, 8 GHz per-user edge capacity and a 30 ms deadline. The
interference floor is not part of that parameter table; the default is
obtained by calibrating the 200 m direct link against its published
2.001 Mb/s rate at 1 MHz (see ``calibrate_interference``) and should not
be read as a measured choice.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import calibrate_interference
from .errors import ConfigError, DomainError
from .model import (ComputeTask, DirectLink, IrsLink, IrsPanel, Point3, Processor,
                    RadioEnvironment)
from .units import db_to_linear

# Reference anchor used to calibrate the interference floor: the direct
# uplink at 200 m and 1 MHz produces 2.001 Mb/s. The reflected-link anchor
# (10.53 Mb/s at the same bandwidth) selects the antenna-gain reading.
ANCHOR_BANDWIDTH_HZ = 1e6
ANCHOR_SEPARATION_M = 200.0
ANCHOR_RATE_BPS = 2.001e6
IRS_ANCHOR_RATE_BPS = 10.53e6

DEFAULT_INTERFERENCE_W = calibrate_interference(
    DirectLink(tx_power_w=5.0, bandwidth_hz=ANCHOR_BANDWIDTH_HZ,
               distance_m=ANCHOR_SEPARATION_M, fading_coeff=1.0),
    path_loss_exponent=5.5,
    observed_rate_bps=ANCHOR_RATE_BPS,
)

GAIN_INTERPRETATIONS = ("db", "linear")

_MAX_GRID_POINTS = 1_000_000

SWEEP_VARIABLES = ("bandwidth_hz", "data_bytes", "distance_m", "separation_m")


# ---------------------------------------------------------------------------
# key table

def _positive(v: float) -> bool:
    return v > 0


def _non_negative(v: float) -> bool:
    return v >= 0


def _angle_deg(v: float) -> bool:
    return 0 <= v < 90


def _amplitude(v: float) -> bool:
    return 0 < v <= 1


@dataclass(frozen=True)
class _Key:
    kind: str                      # float | int | str | point
    default: Any
    check: Any = None
    rule: str = ""


_SCHEMA: dict[str, dict[str, _Key]] = {
    "environment": {
        "interference_power_w": _Key("float", DEFAULT_INTERFERENCE_W, _positive, "must be > 0"),
        "path_loss_exponent": _Key("float", 5.5, _positive, "must be > 0"),
        "carrier_frequency_ghz": _Key("float", 120.0, _positive, "must be > 0"),
        "cell_edge_m": _Key("float", 200.0, _positive, "must be > 0"),
    },
    "direct": {
        "tx_power_w": _Key("float", 5.0, _positive, "must be > 0"),
        "bandwidth_hz": _Key("float", 1e6, _positive, "must be > 0"),
        "distance_m": _Key("float", 200.0, _positive, "must be > 0"),
        "fading_coeff": _Key("float", 1.0, _non_negative, "must be >= 0"),
    },
    "irs": {
        "tx_power_w": _Key("float", 2.0, _positive, "must be > 0"),
        "bandwidth_hz": _Key("float", 1e6, _positive, "must be > 0"),
        "tx_gain_db": _Key("float", 20.0),
        "rx_gain_db": _Key("float", 20.0),
        "gain_interpretation": _Key("str", "db",
                                    lambda v: v in GAIN_INTERPRETATIONS,
                                    "must be 'db' or 'linear'"),
        "theta_t_deg": _Key("float", 45.0, _angle_deg, "must be in [0, 90)"),
        "theta_r_deg": _Key("float", 45.0, _angle_deg, "must be in [0, 90)"),
        "d1_m": _Key("float", 100.0, _positive, "must be > 0"),
        "d2_m": _Key("float", 100.0, _positive, "must be > 0"),
        "elements_m": _Key("int", 100, lambda v: v >= 1, "must be >= 1"),
        "elements_n": _Key("int", 100, lambda v: v >= 1, "must be >= 1"),
        "element_len_x_m": _Key("float", 0.0038, _positive, "must be > 0"),
        "element_len_y_m": _Key("float", 0.0038, _positive, "must be > 0"),
        "amplitude": _Key("float", 0.9, _amplitude, "must be in (0, 1]"),
        "bs_position_m": _Key("point", [0.0, 0.0, 8.0]),
        "irs_position_m": _Key("point", [100.0, 100.0, 8.0]),
    },
    "compute": {
        "data_bytes": _Key("float", 5000.0, _non_negative, "must be >= 0"),
        "cycles_per_bit": _Key("float", 1000.0, _positive, "must be > 0"),
        "deadline_s": _Key("float", 0.030, _positive, "must be > 0"),
        "ue_cpu_min_ghz": _Key("float", 2.0, _positive, "must be > 0"),
        "ue_cpu_max_ghz": _Key("float", 4.0, _positive, "must be > 0"),
        "ue_cpu_step_ghz": _Key("float", 1.0, _positive, "must be > 0"),
        "ue_occupied_hz": _Key("float", 0.0, _non_negative, "must be >= 0"),
        "mec_per_user_ghz": _Key("float", 8.0, _positive, "must be > 0"),
        "mec_pool_ghz": _Key("float", 80.0, _positive, "must be > 0"),
        "mec_occupied_hz": _Key("float", 0.0, _non_negative, "must be >= 0"),
        "concurrent_users": _Key("int", 1, lambda v: v >= 1, "must be >= 1"),
    },
    "sweep": {
        "bandwidth_min_hz": _Key("float", 1e6, _positive, "must be > 0"),
        "bandwidth_max_hz": _Key("float", 10e6, _positive, "must be > 0"),
        "bandwidth_step_hz": _Key("float", 0.25e6, _positive, "must be > 0"),
        "data_min_bytes": _Key("float", 5000.0, _non_negative, "must be >= 0"),
        "data_max_bytes": _Key("float", 20000.0, _non_negative, "must be >= 0"),
        "data_step_bytes": _Key("float", 250.0, _positive, "must be > 0"),
        "separation_min_m": _Key("float", 10.0, _positive, "must be > 0"),
        "separation_max_m": _Key("float", 200.0, _positive, "must be > 0"),
        "separation_step_m": _Key("float", 5.0, _positive, "must be > 0"),
    },
}

_UNIT_SUFFIXES = ("_ghz", "_mhz", "_khz", "_hz", "_dbm", "_db", "_deg", "_rad",
                  "_mm", "_km", "_m", "_ms", "_s", "_bytes", "_bits", "_w", "_mw")


def _stem(key: str) -> str:
    for suf in _UNIT_SUFFIXES:
        if key.endswith(suf):
            return key[: -len(suf)]
    return key


def _find_line(text: str, section: str, key: str) -> int:
    """1-based line of ``key`` inside ``[section]`` of the source text, 0 if absent."""
    current = ""
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"\[([^\]]+)\]", stripped)
        if m:
            current = m.group(1).strip().strip('"')
            if current == section and key == "":
                return i
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return i
        if key and re.match(rf'"?{re.escape(key)}"?\s*[=:]', stripped) and section == "":
            return i
    return 0


# ---------------------------------------------------------------------------
# grids

def inclusive_grid(start: float, stop: float, step: float) -> list[float]:
    """Arithmetic grid from start to stop inclusive."""
    if step <= 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if start > stop:
        raise DomainError(f"grid start {start} exceeds stop {stop}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    if n > _MAX_GRID_POINTS:
        raise DomainError(f"grid of {n} points exceeds the {_MAX_GRID_POINTS} limit")
    return [start + i * step for i in range(n)]


# ---------------------------------------------------------------------------
# scenario

class Scenario:
    """A fully validated, normalized parameter set.

    Instances are immutable in use: all derived objects are frozen
    dataclasses and the canonical mapping is never mutated after
    construction. Equality and the fingerprint are defined over the
    canonical mapping, so ``load(render(load(x))) == load(x)``.
    """

    def __init__(self, config: Mapping[str, Mapping[str, Any]]):
        self._config = {s: dict(config[s]) for s in _SCHEMA}
        _cross_validate(self._config)

        env = self._config["environment"]
        d = self._config["direct"]
        r = self._config["irs"]
        c = self._config["compute"]

        self.environment = RadioEnvironment(
            interference_power_w=env["interference_power_w"],
            path_loss_exponent=env["path_loss_exponent"],
            carrier_frequency_hz=env["carrier_frequency_ghz"] * 1e9,
        )
        self.direct = DirectLink(
            tx_power_w=d["tx_power_w"],
            bandwidth_hz=d["bandwidth_hz"],
            distance_m=d["distance_m"],
            fading_coeff=d["fading_coeff"],
        )
        self.gain_interpretation = r["gain_interpretation"]
        panel = IrsPanel(
            elements_m=r["elements_m"],
            elements_n=r["elements_n"],
            element_len_x_m=r["element_len_x_m"],
            element_len_y_m=r["element_len_y_m"],
            amplitude=r["amplitude"],
        )
        self.irs = IrsLink(
            tx_power_w=r["tx_power_w"],
            bandwidth_hz=r["bandwidth_hz"],
            tx_gain=self._gain(r["tx_gain_db"]),
            rx_gain=self._gain(r["rx_gain_db"]),
            theta_t_rad=math.radians(r["theta_t_deg"]),
            theta_r_rad=math.radians(r["theta_r_deg"]),
            d1_m=r["d1_m"],
            d2_m=r["d2_m"],
            panel=panel,
        )
        self.bs_position = Point3(*r["bs_position_m"])
        self.irs_position = Point3(*r["irs_position_m"])

        self.deadline_s = c["deadline_s"]
        self.cycles_per_bit = c["cycles_per_bit"]
        self.data_bytes = c["data_bytes"]
        self.ue_cpus = tuple(
            Processor(total_hz=g * 1e9, occupied_hz=c["ue_occupied_hz"])
            for g in inclusive_grid(c["ue_cpu_min_ghz"], c["ue_cpu_max_ghz"],
                                    c["ue_cpu_step_ghz"])
        )
        self.mec = Processor(total_hz=c["mec_per_user_ghz"] * 1e9,
                             occupied_hz=c["mec_occupied_hz"])

    def _gain(self, value: float) -> float:
        if self.gain_interpretation == "db":
            return db_to_linear(value)
        return value

    # grids ---------------------------------------------------------------

    @property
    def bandwidth_grid(self) -> list[float]:
        s = self._config["sweep"]
        return inclusive_grid(s["bandwidth_min_hz"], s["bandwidth_max_hz"],
                              s["bandwidth_step_hz"])

    @property
    def data_grid(self) -> list[float]:
        s = self._config["sweep"]
        return inclusive_grid(s["data_min_bytes"], s["data_max_bytes"], s["data_step_bytes"])

    @property
    def separation_grid(self) -> list[float]:
        s = self._config["sweep"]
        return inclusive_grid(s["separation_min_m"], s["separation_max_m"],
                              s["separation_step_m"])

    def task(self, data_bytes: float | None = None) -> ComputeTask:
        return ComputeTask(
            data_bytes=self.data_bytes if data_bytes is None else data_bytes,
            cycles_per_bit=self.cycles_per_bit,
            deadline_s=self.deadline_s,
        )

    # identity ------------------------------------------------------------

    def get(self, dotted: str) -> Any:
        section, key = _split_dotted(dotted)
        return self._config[section][key]

    def as_config(self) -> dict[str, dict[str, Any]]:
        return {s: dict(kv) for s, kv in self._config.items()}

    def with_overrides(self, overrides: Mapping[str, Any]) -> "Scenario":
        """New scenario with dotted ``section.key`` values replaced and revalidated."""
        cfg = self.as_config()
        for dotted, value in overrides.items():
            section, key = _split_dotted(dotted)
            cfg[section][key] = _coerce(section, key, value, "", 0)
        return Scenario(cfg)

    @property
    def fingerprint(self) -> str:
        digest = hashlib.sha256(render_scenario(self).encode("utf-8")).hexdigest()
        return digest[:16]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self._config == other._config

    def __repr__(self) -> str:
        return f"Scenario({self.fingerprint})"


def _split_dotted(dotted: str) -> tuple[str, str]:
    if "." not in dotted:
        raise ConfigError(f"override '{dotted}' must be section.key")
    section, key = dotted.split(".", 1)
    if section not in _SCHEMA:
        raise ConfigError("unknown section", key=section)
    if key not in _SCHEMA[section]:
        raise ConfigError(_unknown_key_message(section, key), key=f"{section}.{key}")
    return section, key


def _unknown_key_message(section: str, key: str) -> str:
    known = _SCHEMA[section]
    stem = _stem(key)
    for candidate in known:
        if _stem(candidate) == stem and candidate != key:
            return f"unit-suffix mismatch: expected '{candidate}'"
    return "unknown key"


def _coerce(section: str, key: str, value: Any, text: str, line: int) -> Any:
    spec = _SCHEMA[section][key]
    if spec.kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"expected a number, got {value!r}", key=f"{section}.{key}",
                              line=line)
        value = float(value)
    elif spec.kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"expected an integer, got {value!r}", key=f"{section}.{key}",
                              line=line)
        value = int(value)
    elif spec.kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"expected a string, got {value!r}", key=f"{section}.{key}",
                              line=line)
    elif spec.kind == "point":
        if (not isinstance(value, (list, tuple)) or len(value) != 3
                or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
            raise ConfigError(f"expected [x, y, z] meters, got {value!r}",
                              key=f"{section}.{key}", line=line)
        value = [float(v) for v in value]
    if spec.check is not None and not spec.check(value):
        raise ConfigError(f"invalid value {value!r}: {spec.rule}", key=f"{section}.{key}",
                          line=line)
    return value


def _cross_validate(cfg: dict[str, dict[str, Any]]) -> None:
    c = cfg["compute"]
    if c["ue_cpu_min_ghz"] > c["ue_cpu_max_ghz"]:
        raise ConfigError("ue_cpu_min_ghz exceeds ue_cpu_max_ghz", key="compute.ue_cpu_min_ghz")
    if c["ue_occupied_hz"] >= c["ue_cpu_min_ghz"] * 1e9:
        raise ConfigError("occupied UE frequency saturates the smallest CPU",
                          key="compute.ue_occupied_hz")
    if c["mec_occupied_hz"] >= c["mec_per_user_ghz"] * 1e9:
        raise ConfigError("occupied edge frequency saturates the per-user share",
                          key="compute.mec_occupied_hz")
    if c["concurrent_users"] * c["mec_per_user_ghz"] > c["mec_pool_ghz"]:
        raise ConfigError(
            f"{c['concurrent_users']} users at {c['mec_per_user_ghz']} GHz exceed the "
            f"{c['mec_pool_ghz']} GHz edge pool", key="compute.concurrent_users")
    s = cfg["sweep"]
    for lo, hi, step in (("bandwidth_min_hz", "bandwidth_max_hz", "bandwidth_step_hz"),
                         ("data_min_bytes", "data_max_bytes", "data_step_bytes"),
                         ("separation_min_m", "separation_max_m", "separation_step_m")):
        if s[lo] > s[hi]:
            raise ConfigError(f"{lo} exceeds {hi}", key=f"sweep.{lo}")
        try:
            inclusive_grid(s[lo], s[hi], s[step])
        except DomainError as e:
            raise ConfigError(str(e), key=f"sweep.{step}") from None


# ---------------------------------------------------------------------------
# load / render

def default_scenario() -> Scenario:
    return Scenario({s: {k: v.default for k, v in kv.items()} for s, kv in _SCHEMA.items()})


def load_scenario(text: str, fmt: str = "toml") -> Scenario:
    """Parse config text, fill defaults, validate everything.

    Unknown sections or keys, wrong unit suffixes, type errors and invariant
    violations all raise :class:`ConfigError` naming the key and line.
    """
    if fmt == "toml":
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"config does not parse: {e}") from None
    elif fmt == "json":
        try:
            raw = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as e:
            raise ConfigError(f"config does not parse: {e}") from None
        if not isinstance(raw, dict):
            raise ConfigError("top level must be an object of sections")
    else:
        raise ConfigError(f"unknown config format '{fmt}'")

    cfg = {s: {k: v.default for k, v in kv.items()} for s, kv in _SCHEMA.items()}
    for section, body in raw.items():
        if section not in _SCHEMA:
            raise ConfigError("unknown section", key=section,
                              line=_find_line(text, section, ""))
        if not isinstance(body, dict):
            raise ConfigError("section must hold key = value pairs", key=section,
                              line=_find_line(text, section, ""))
        for key, value in body.items():
            line = _find_line(text, section, key)
            if key not in _SCHEMA[section]:
                raise ConfigError(_unknown_key_message(section, key),
                                  key=f"{section}.{key}", line=line)
            cfg[section][key] = _coerce(section, key, value, text, line)
    return Scenario(cfg)


def load_scenario_file(path: str, fmt: str | None = None) -> Scenario:
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "toml"
    with open(path, "r", encoding="utf-8") as f:
        return load_scenario(f.read(), fmt=fmt)


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        raise ConfigError(f"cannot render {value!r}")
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    raise ConfigError(f"cannot render {value!r}")


def render_scenario(scenario: Scenario) -> str:
    """Canonical config text; reloading it reproduces the scenario exactly."""
    out = []
    cfg = scenario.as_config()
    for section in _SCHEMA:
        out.append(f"[{section}]")
        for key in _SCHEMA[section]:
            out.append(f"{key} = {_format_value(cfg[section][key])}")
        out.append("")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepSpec:
    """An inclusive arithmetic grid over one scenario variable."""

    variable: str
    start: float
    stop: float
    step: float
    overrides: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(
                f"sweep variable must be one of {SWEEP_VARIABLES}, got '{self.variable}'")
        inclusive_grid(self.start, self.stop, self.step)  # validates bounds and size

    def values(self) -> list[float]:
        return inclusive_grid(self.start, self.stop, self.step)


def _variable_overrides(variable: str, value: float) -> dict[str, Any]:
    if variable == "bandwidth_hz":
        return {"direct.bandwidth_hz": value, "irs.bandwidth_hz": value}
    if variable == "data_bytes":
        return {"compute.data_bytes": value}
    if variable == "distance_m":
        return {"direct.distance_m": value}
    if variable == "separation_m":
        # Total separation; the reflected path splits it evenly across segments.
        return {"direct.distance_m": value, "irs.d1_m": value / 2.0, "irs.d2_m": value / 2.0}
    raise DomainError(f"unknown sweep variable '{variable}'")


def expand_sweep(spec: SweepSpec, base: Scenario) -> list[Scenario]:
    """Scenario per grid point, ascending in the swept variable, each revalidated."""
    fixed = base.with_overrides(spec.overrides) if spec.overrides else base
    return [fixed.with_overrides(_variable_overrides(spec.variable, v))
            for v in spec.values()]


def iter_sweep(spec: SweepSpec, base: Scenario) -> Iterator[tuple[float, Scenario]]:
    fixed = base.with_overrides(spec.overrides) if spec.overrides else base
    for v in spec.values():
        yield v, fixed.with_overrides(_variable_overrides(spec.variable, v))

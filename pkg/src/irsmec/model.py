"""Immutable value objects describing links, panels, tasks and processors.

Every type validates its invariants on construction and raises
:class:`~irsmec.errors.DomainError` on violation, so downstream math can
assume well-formed inputs. Instances are frozen and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError
from .units import LIGHT_SPEED_M_PER_S, wavelength_m

# Relative tolerance for the carrier-frequency/wavelength consistency check.
_WAVELENGTH_RTOL = 1e-9


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


@dataclass(frozen=True)
class RadioEnvironment:
    """Shared propagation environment: interference floor and path loss.

    ``wavelength_m`` is derived from ``carrier_frequency_hz`` when omitted;
    when both are given they must agree.
    """

    interference_power_w: float
    path_loss_exponent: float
    carrier_frequency_hz: float = 120e9
    wavelength_m: float = field(default=0.0)

    def __post_init__(self):
        _require(self.interference_power_w > 0,
                 f"interference power must be positive, got {self.interference_power_w}")
        _require(self.path_loss_exponent > 0,
                 f"path loss exponent must be positive, got {self.path_loss_exponent}")
        _require(self.carrier_frequency_hz > 0,
                 f"carrier frequency must be positive, got {self.carrier_frequency_hz}")
        derived = wavelength_m(self.carrier_frequency_hz)
        if self.wavelength_m == 0.0:
            object.__setattr__(self, "wavelength_m", derived)
        else:
            _require(
                abs(self.wavelength_m - derived) <= _WAVELENGTH_RTOL * derived,
                f"wavelength {self.wavelength_m} m inconsistent with carrier "
                f"{self.carrier_frequency_hz} Hz (expected {derived} m at "
                f"c = {LIGHT_SPEED_M_PER_S} m/s)",
            )


@dataclass(frozen=True)
class DirectLink:
    """Uplink without a reflecting panel: transmit power, bandwidth, geometry."""

    tx_power_w: float
    bandwidth_hz: float
    distance_m: float
    fading_coeff: float = 1.0

    def __post_init__(self):
        _require(self.tx_power_w > 0, f"tx power must be positive, got {self.tx_power_w}")
        _require(self.bandwidth_hz > 0, f"bandwidth must be positive, got {self.bandwidth_hz}")
        _require(self.distance_m > 0, f"distance must be positive, got {self.distance_m}")
        _require(self.fading_coeff >= 0,
                 f"fading coefficient must be non-negative, got {self.fading_coeff}")


@dataclass(frozen=True)
class IrsPanel:
    """Reflecting panel: element grid, element dimensions, amplitude."""

    elements_m: int
    elements_n: int
    element_len_x_m: float
    element_len_y_m: float
    amplitude: float

    def __post_init__(self):
        _require(self.elements_m >= 1, f"element count M must be >= 1, got {self.elements_m}")
        _require(self.elements_n >= 1, f"element count N must be >= 1, got {self.elements_n}")
        _require(self.element_len_x_m > 0,
                 f"element length x must be positive, got {self.element_len_x_m}")
        _require(self.element_len_y_m > 0,
                 f"element length y must be positive, got {self.element_len_y_m}")
        _require(0 < self.amplitude <= 1,
                 f"amplitude must be in (0, 1], got {self.amplitude}")


@dataclass(frozen=True)
class IrsLink:
    """Uplink reflected off a panel, split into UE->panel and panel->BS segments.

    Gains are linear power ratios; dB-valued configs are converted before
    this object is built.
    """

    tx_power_w: float
    bandwidth_hz: float
    tx_gain: float
    rx_gain: float
    theta_t_rad: float
    theta_r_rad: float
    d1_m: float
    d2_m: float
    panel: IrsPanel

    def __post_init__(self):
        _require(self.tx_power_w > 0, f"tx power must be positive, got {self.tx_power_w}")
        _require(self.bandwidth_hz > 0, f"bandwidth must be positive, got {self.bandwidth_hz}")
        _require(self.tx_gain > 0, f"tx gain must be positive, got {self.tx_gain}")
        _require(self.rx_gain > 0, f"rx gain must be positive, got {self.rx_gain}")
        _require(0 <= self.theta_t_rad < math.pi / 2,
                 f"transmit angle must be in [0, pi/2), got {self.theta_t_rad}")
        _require(0 <= self.theta_r_rad < math.pi / 2,
                 f"receive angle must be in [0, pi/2), got {self.theta_r_rad}")
        _require(self.d1_m > 0, f"UE-panel distance must be positive, got {self.d1_m}")
        _require(self.d2_m > 0, f"panel-BS distance must be positive, got {self.d2_m}")


@dataclass(frozen=True)
class Point3:
    """Cartesian position in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            _require(math.isfinite(c), f"coordinates must be finite, got {c}")


@dataclass(frozen=True)
class ComputeTask:
    """One offloadable task: payload size, cycle density, completion deadline."""

    data_bytes: float
    cycles_per_bit: float
    deadline_s: float

    def __post_init__(self):
        _require(self.data_bytes >= 0, f"data size must be non-negative, got {self.data_bytes}")
        _require(self.cycles_per_bit > 0,
                 f"cycle density must be positive, got {self.cycles_per_bit}")
        _require(self.deadline_s > 0, f"deadline must be positive, got {self.deadline_s}")


@dataclass(frozen=True)
class Processor:
    """CPU with a total frequency budget and an already-occupied share."""

    total_hz: float
    occupied_hz: float = 0.0

    def __post_init__(self):
        _require(self.total_hz > 0, f"total frequency must be positive, got {self.total_hz}")
        _require(0 <= self.occupied_hz <= self.total_hz,
                 f"occupied frequency must be in [0, total], got {self.occupied_hz}")

    @property
    def free_hz(self) -> float:
        return self.total_hz - self.occupied_hz

"""Unit conversions shared across the package.

All engine code works in base SI (W, Hz, m, s, bytes at the boundary /
bits inside the latency math). Conversions happen once, here.
"""

import math

from .errors import DomainError

# Propagation speed used to derive wavelength from carrier frequency.
LIGHT_SPEED_M_PER_S = 2.998e8


def db_to_linear(db: float) -> float:
    """Power ratio from decibels (20 dB -> 100)."""
    return 10.0 ** (db / 10.0)


def linear_to_db(ratio: float) -> float:
    """Decibels from a positive power ratio."""
    if ratio <= 0:
        raise DomainError(f"cannot express non-positive ratio {ratio} in dB")
    return 10.0 * math.log10(ratio)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise DomainError(f"cannot express non-positive power {watts} W in dBm")
    return 10.0 * math.log10(watts * 1e3)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) / 1e3


def wavelength_m(carrier_frequency_hz: float) -> float:
    """Wavelength for a carrier frequency, always derived, never hard-coded."""
    if carrier_frequency_hz <= 0:
        raise DomainError(f"carrier frequency must be positive, got {carrier_frequency_hz}")
    return LIGHT_SPEED_M_PER_S / carrier_frequency_hz

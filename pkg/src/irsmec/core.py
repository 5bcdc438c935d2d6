"""Closed-form link budgets, latency models and their inversions.

All operations are pure scalar functions of immutable inputs (64-bit
floats throughout) and are safe to call concurrently. Task payloads are
given in bytes and converted to bits exactly once, inside the latency
operations.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, InfeasibleError, SaturatedProcessorError
from .model import ComputeTask, DirectLink, IrsLink, IrsPanel, Point3, Processor, RadioEnvironment

BITS_PER_BYTE = 8.0


def received_power_direct(link: DirectLink, env: RadioEnvironment) -> float:
    """Received uplink power in W: transmit power times fading over distance^alpha."""
    if link.distance_m <= 0:
        raise DomainError(f"distance must be positive, got {link.distance_m}")
    return link.tx_power_w * link.fading_coeff / link.distance_m ** env.path_loss_exponent


def snr(received_power_w: float, env: RadioEnvironment) -> float:
    """Signal-to-interference ratio (linear)."""
    if env.interference_power_w <= 0:
        raise DomainError(
            f"interference power must be positive, got {env.interference_power_w}")
    if received_power_w < 0:
        raise DomainError(f"received power must be non-negative, got {received_power_w}")
    return received_power_w / env.interference_power_w


def throughput(bandwidth_hz: float, snr_ratio: float) -> float:
    """Shannon uplink rate in bit/s: bandwidth times log2(1 + SNR)."""
    if bandwidth_hz <= 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth_hz}")
    if snr_ratio < 0:
        raise DomainError(f"snr must be non-negative, got {snr_ratio}")
    return bandwidth_hz * math.log2(1.0 + snr_ratio)


def segment_distance(a: Point3, b: Point3) -> float:
    """Euclidean distance between two points, e.g. UE->panel or panel->BS."""
    return math.hypot(a.x - b.x, a.y - b.y, a.z - b.z)


def scattering_gain(panel: IrsPanel, wavelength_m: float) -> float:
    """Per-element aperture gain 4*pi*dx*dy / wavelength^2."""
    if wavelength_m <= 0:
        raise DomainError(f"wavelength must be positive, got {wavelength_m}")
    return 4.0 * math.pi * panel.element_len_x_m * panel.element_len_y_m / wavelength_m ** 2


def received_power_irs(link: IrsLink, env: RadioEnvironment) -> float:
    """Received power in W for the panel-reflected uplink.

    Aggregate two-segment budget: transmit power, both antenna gains, the
    per-element scattering gain, element counts squared, element area,
    wavelength squared, incidence/departure cosines and amplitude squared,
    over 64*pi^3 times the squared product of the segment distances.
    """
    if link.d1_m <= 0 or link.d2_m <= 0:
        raise DomainError(
            f"segment distances must be positive, got d1={link.d1_m}, d2={link.d2_m}")
    p = link.panel
    g = scattering_gain(p, env.wavelength_m)
    numerator = (
        link.tx_power_w * link.tx_gain * link.rx_gain * g
        * p.elements_m ** 2 * p.elements_n ** 2
        * p.element_len_x_m * p.element_len_y_m * env.wavelength_m ** 2
        * math.cos(link.theta_t_rad) * math.cos(link.theta_r_rad)
        * p.amplitude ** 2
    )
    return numerator / (64.0 * math.pi ** 3 * (link.d1_m * link.d2_m) ** 2)


def local_latency(task: ComputeTask, cpu: Processor) -> float:
    """Seconds to process a task on the device's own free CPU frequency."""
    free = cpu.total_hz - cpu.occupied_hz
    if free <= 0:
        raise SaturatedProcessorError(
            f"no free CPU frequency: occupied {cpu.occupied_hz} Hz of {cpu.total_hz} Hz")
    return task.data_bytes * BITS_PER_BYTE * task.cycles_per_bit / free


class OffloadLatency(NamedTuple):
    """Offloading latency split into its two addends."""

    total_s: float
    transmission_s: float
    processing_s: float


def offload_latency(task: ComputeTask, uplink_rate_bps: float, mec: Processor) -> OffloadLatency:
    """Uplink transmission time plus edge processing time.

    Result delivery back to the device is not modeled.
    """
    if uplink_rate_bps <= 0:
        raise DomainError(f"uplink rate must be positive, got {uplink_rate_bps}")
    free = mec.total_hz - mec.occupied_hz
    if free <= 0:
        raise SaturatedProcessorError(
            f"no free edge CPU frequency: occupied {mec.occupied_hz} Hz of {mec.total_hz} Hz")
    bits = task.data_bytes * BITS_PER_BYTE
    transmission = bits / uplink_rate_bps
    processing = bits * task.cycles_per_bit / free
    return OffloadLatency(transmission + processing, transmission, processing)


def min_bandwidth_for_deadline(task: ComputeTask, snr_ratio: float, mec: Processor) -> float:
    """Smallest bandwidth in Hz that completes the offloaded task by its deadline.

    Closed-form inversion of the offload latency through the Shannon rate:
    the returned bandwidth round-trips through ``offload_latency`` to the
    deadline within 1e-9 relative.
    """
    if snr_ratio <= 0:
        raise DomainError(f"snr must be positive to invert the rate, got {snr_ratio}")
    free = mec.total_hz - mec.occupied_hz
    if free <= 0:
        raise SaturatedProcessorError(
            f"no free edge CPU frequency: occupied {mec.occupied_hz} Hz of {mec.total_hz} Hz")
    bits = task.data_bytes * BITS_PER_BYTE
    if bits == 0:
        return 0.0
    processing = bits * task.cycles_per_bit / free
    if processing >= task.deadline_s:
        raise InfeasibleError(
            f"deadline {task.deadline_s} s infeasible: edge processing alone takes "
            f"{processing} s, leaving no time for transmission")
    rate_needed = bits / (task.deadline_s - processing)
    return rate_needed / math.log2(1.0 + snr_ratio)


def max_local_data_for_deadline(cpu: Processor, cycles_per_bit: float, deadline_s: float) -> int:
    """Largest payload in whole bytes the device itself can finish by the deadline."""
    if cycles_per_bit <= 0:
        raise DomainError(f"cycle density must be positive, got {cycles_per_bit}")
    free = cpu.total_hz - cpu.occupied_hz
    if free <= 0:
        raise SaturatedProcessorError(
            f"no free CPU frequency: occupied {cpu.occupied_hz} Hz of {cpu.total_hz} Hz")
    if deadline_s <= 0:
        return 0

    def fits(nbytes: int) -> bool:
        return nbytes * BITS_PER_BYTE * cycles_per_bit / free <= deadline_s

    # Closed-form candidate, then walk off any floating-point rounding of the
    # floor so the result is exact to the byte.
    n = int(deadline_s * free / (BITS_PER_BYTE * cycles_per_bit))
    while fits(n + 1):
        n += 1
    while n > 0 and not fits(n):
        n -= 1
    return n


def calibrate_interference(link: DirectLink, path_loss_exponent: float,
                           observed_rate_bps: float) -> float:
    """Interference power in W that makes the link produce the observed rate.

    Inverts the received-power / SNR / Shannon chain for a deterministic
    fading coefficient; the result round-trips through ``throughput`` to the
    observed rate within 1e-9 relative.
    """
    if observed_rate_bps <= 0:
        raise DomainError(f"observed rate must be positive, got {observed_rate_bps}")
    if path_loss_exponent <= 0:
        raise DomainError(f"path loss exponent must be positive, got {path_loss_exponent}")
    received = link.tx_power_w * link.fading_coeff / link.distance_m ** path_loss_exponent
    if received <= 0:
        raise InfeasibleError(
            "zero received power (fading coefficient 0) cannot produce a positive rate")
    try:
        snr_required = 2.0 ** (observed_rate_bps / link.bandwidth_hz) - 1.0
    except OverflowError:
        raise InfeasibleError(
            f"observed rate {observed_rate_bps} b/s is unreachable at bandwidth "
            f"{link.bandwidth_hz} Hz") from None
    result = received / snr_required
    if result <= 0 or not math.isfinite(result):
        raise InfeasibleError(
            f"observed rate {observed_rate_bps} b/s is unreachable at bandwidth "
            f"{link.bandwidth_hz} Hz")
    return result

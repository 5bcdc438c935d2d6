"""Stochastic channel realizations and Monte Carlo throughput estimates.

The fading coefficient is exponentially distributed with unit mean and is
sampled by inverse CDF, ``h = -ln(u)`` with ``u`` uniform on (0, 1], so any
implementation seeded the same way reproduces the same stream. Figure
reproduction never consults this module; it is opt-in from the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .core import received_power_direct, snr, throughput
from .errors import DomainError
from .model import DirectLink, RadioEnvironment


@dataclass(frozen=True)
class FadingSampler:
    """Reproducible fading stream: (seed, stream_id) fully determine the draws.

    Distinct stream_ids give independent substreams for parallel sweep points.
    """

    seed: int
    stream_id: int = 0

    def _generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))

    def uniform_open_closed(self, count: int) -> np.ndarray:
        """Uniform draws on (0, 1], the inverse-CDF inputs."""
        if count < 0:
            raise DomainError(f"sample count must be non-negative, got {count}")
        return 1.0 - self._generator().random(count)


def sample_h(sampler: FadingSampler, count: int) -> np.ndarray:
    """i.i.d. unit-mean exponential fading coefficients via h = -ln(u)."""
    return -np.log(sampler.uniform_open_closed(count))


def throughput_over_fading(link: DirectLink, env: RadioEnvironment, h) -> np.ndarray:
    """Deterministic rate map over an array of fading coefficients."""
    h = np.asarray(h, dtype=np.float64)
    unit = DirectLink(link.tx_power_w, link.bandwidth_hz, link.distance_m, fading_coeff=1.0)
    s = snr(received_power_direct(unit, env), env)
    return link.bandwidth_hz * np.log2(1.0 + s * h)


class McEstimate(NamedTuple):
    mean_bps: float
    half_width_bps: float
    n_samples: int


def mean_throughput_mc(link: DirectLink, env: RadioEnvironment,
                       sampler: FadingSampler, n_samples: int) -> McEstimate:
    """Monte Carlo mean uplink rate over fading, with a 95% half-width.

    The half-width is the normal approximation 1.96 * s / sqrt(n); it is NaN
    for a single sample, where no spread can be estimated.
    """
    if n_samples < 1:
        raise DomainError(f"need at least one sample, got {n_samples}")
    unit = DirectLink(link.tx_power_w, link.bandwidth_hz, link.distance_m, fading_coeff=1.0)
    s_unit = snr(received_power_direct(unit, env), env)
    u = sampler.uniform_open_closed(n_samples)
    mean, sd = kernels.mc_throughput_stats(u, link.bandwidth_hz, s_unit)
    if n_samples == 1:
        return McEstimate(mean, float("nan"), 1)
    return McEstimate(mean, 1.96 * sd / math.sqrt(n_samples), n_samples)


def deterministic_throughput(link: DirectLink, env: RadioEnvironment) -> float:
    """Rate at the mean fading coefficient h = 1, for comparison against MC."""
    unit = DirectLink(link.tx_power_w, link.bandwidth_hz, link.distance_m, fading_coeff=1.0)
    return throughput(link.bandwidth_hz, snr(received_power_direct(unit, env), env))

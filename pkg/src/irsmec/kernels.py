"""Vectorized row kernels behind the sweep engine and the Monte Carlo estimator.

Each kernel exists twice: a numba ``@njit`` build and a pure-numpy build.
The active backend is chosen by the ``IRSMEC_BACKEND`` environment variable
(``auto`` by default, or ``numba`` / ``numpy`` to force one). Both builds
implement identical math; the test suite pins them together at 1e-12
relative, and ``benchmarks/bench_kernels.py`` compares their speed.

Scalar one-off evaluations live in :mod:`irsmec.core`; these kernels only
serve bulk row evaluation, where the jitted loops pay off.
"""

from __future__ import annotations

import math
import os

import numpy as np

BACKEND_ENV = "IRSMEC_BACKEND"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but stay importable
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def backend_name() -> str:
    """Active backend: 'numba' or 'numpy'."""
    mode = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if mode in ("numpy", "off", "0"):
        return "numpy"
    if mode in ("numba", "jit", "1"):
        if not HAVE_NUMBA:
            raise RuntimeError(f"{BACKEND_ENV}={mode} but numba is not importable")
        return "numba"
    return "numba" if HAVE_NUMBA else "numpy"


def _rows(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


# ---------------------------------------------------------------------------
# numpy builds

def _power_direct_np(distance_m, tx_power_w, fading, alpha):
    return tx_power_w * fading / distance_m ** alpha


def _power_irs_np(d1_m, d2_m, numerator_w_m4):
    return numerator_w_m4 / (64.0 * np.pi ** 3 * (d1_m * d2_m) ** 2)


def _throughput_np(bandwidth_hz, received_power_w, noise_w):
    return bandwidth_hz * np.log2(1.0 + received_power_w / noise_w)


def _local_np(data_bytes, cycles_per_bit, free_hz):
    return data_bytes * 8.0 * cycles_per_bit / free_hz


def _offload_np(data_bytes, rate_bps, cycles_per_bit, free_hz):
    bits = data_bytes * 8.0
    return bits / rate_bps + bits * cycles_per_bit / free_hz


def _mc_stats_np(u, bandwidth_hz, snr_unit_fading):
    h = -np.log(u)
    x = bandwidth_hz * np.log2(1.0 + snr_unit_fading * h)
    n = x.size
    mean = float(np.sum(x) / n)
    if n < 2:
        return mean, 0.0
    var = float(np.sum((x - mean) ** 2) / (n - 1))
    return mean, math.sqrt(var)


# ---------------------------------------------------------------------------
# numba builds (same math, explicit loops)

@njit(cache=True)
def _power_direct_nb(distance_m, tx_power_w, fading, alpha):
    out = np.empty(distance_m.size, dtype=np.float64)
    for i in range(distance_m.size):
        out[i] = tx_power_w * fading / distance_m[i] ** alpha
    return out


@njit(cache=True)
def _power_irs_nb(d1_m, d2_m, numerator_w_m4):
    out = np.empty(d1_m.size, dtype=np.float64)
    for i in range(d1_m.size):
        out[i] = numerator_w_m4 / (64.0 * np.pi ** 3 * (d1_m[i] * d2_m[i]) ** 2)
    return out


@njit(cache=True)
def _throughput_nb(bandwidth_hz, received_power_w, noise_w):
    out = np.empty(bandwidth_hz.size, dtype=np.float64)
    for i in range(bandwidth_hz.size):
        out[i] = bandwidth_hz[i] * np.log2(1.0 + received_power_w[i] / noise_w)
    return out


@njit(cache=True)
def _local_nb(data_bytes, cycles_per_bit, free_hz):
    out = np.empty(data_bytes.size, dtype=np.float64)
    for i in range(data_bytes.size):
        out[i] = data_bytes[i] * 8.0 * cycles_per_bit / free_hz
    return out


@njit(cache=True)
def _offload_nb(data_bytes, rate_bps, cycles_per_bit, free_hz):
    out = np.empty(data_bytes.size, dtype=np.float64)
    for i in range(data_bytes.size):
        bits = data_bytes[i] * 8.0
        out[i] = bits / rate_bps[i] + bits * cycles_per_bit / free_hz
    return out


@njit(cache=True)
def _mc_stats_nb(u, bandwidth_hz, snr_unit_fading):
    n = u.size
    total = 0.0
    x = np.empty(n, dtype=np.float64)
    for i in range(n):
        h = -np.log(u[i])
        x[i] = bandwidth_hz * np.log2(1.0 + snr_unit_fading * h)
        total += x[i]
    mean = total / n
    if n < 2:
        return mean, 0.0
    sq = 0.0
    for i in range(n):
        d = x[i] - mean
        sq += d * d
    return mean, math.sqrt(sq / (n - 1))


# ---------------------------------------------------------------------------
# dispatching wrappers

def power_direct_rows(distance_m, tx_power_w: float, fading: float, alpha: float) -> np.ndarray:
    """Received power per row of distances for the direct uplink."""
    d = _rows(distance_m)
    if backend_name() == "numba":
        return _power_direct_nb(d, float(tx_power_w), float(fading), float(alpha))
    return _power_direct_np(d, float(tx_power_w), float(fading), float(alpha))


def power_irs_rows(d1_m, d2_m, numerator_w_m4: float) -> np.ndarray:
    """Received power per row of segment distances for the reflected uplink.

    ``numerator_w_m4`` is the distance-independent numerator of the budget
    (power, gains, element terms, cosines, amplitude), precomputed by the
    caller from the scalar model.
    """
    d1, d2 = _rows(d1_m), _rows(d2_m)
    if backend_name() == "numba":
        return _power_irs_nb(d1, d2, float(numerator_w_m4))
    return _power_irs_np(d1, d2, float(numerator_w_m4))


def throughput_rows(bandwidth_hz, received_power_w, noise_w: float) -> np.ndarray:
    """Shannon rate per row."""
    b, p = _rows(bandwidth_hz), _rows(received_power_w)
    if backend_name() == "numba":
        return _throughput_nb(b, p, float(noise_w))
    return _throughput_np(b, p, float(noise_w))


def local_latency_rows(data_bytes, cycles_per_bit: float, free_hz: float) -> np.ndarray:
    """Local processing latency per row of payload sizes."""
    d = _rows(data_bytes)
    if backend_name() == "numba":
        return _local_nb(d, float(cycles_per_bit), float(free_hz))
    return _local_np(d, float(cycles_per_bit), float(free_hz))


def offload_latency_rows(data_bytes, rate_bps, cycles_per_bit: float,
                         free_hz: float) -> np.ndarray:
    """Total offload latency per (payload, rate) row."""
    d, r = _rows(data_bytes), _rows(rate_bps)
    if backend_name() == "numba":
        return _offload_nb(d, r, float(cycles_per_bit), float(free_hz))
    return _offload_np(d, r, float(cycles_per_bit), float(free_hz))


def mc_throughput_stats(u, bandwidth_hz: float, snr_unit_fading: float) -> tuple[float, float]:
    """Mean and sample stddev of the rate over fading draws ``h = -ln(u)``."""
    uu = _rows(u)
    if backend_name() == "numba":
        return _mc_stats_nb(uu, float(bandwidth_hz), float(snr_unit_fading))
    return _mc_stats_np(uu, float(bandwidth_hz), float(snr_unit_fading))

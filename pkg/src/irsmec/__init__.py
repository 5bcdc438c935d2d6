"""Link-budget and edge-offloading latency simulator for IRS-assisted uplinks."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    OffloadLatency,
    calibrate_interference,
    local_latency,
    max_local_data_for_deadline,
    min_bandwidth_for_deadline,
    offload_latency,
    received_power_direct,
    received_power_irs,
    scattering_gain,
    segment_distance,
    snr,
    throughput,
)
from .errors import (  # noqa: F401
    ConfigError,
    DomainError,
    InfeasibleError,
    IrsMecError,
    SaturatedProcessorError,
)
from .fading import FadingSampler, McEstimate, mean_throughput_mc, sample_h  # noqa: F401
from .model import (  # noqa: F401
    ComputeTask,
    DirectLink,
    IrsLink,
    IrsPanel,
    Point3,
    Processor,
    RadioEnvironment,
)
from .scenario import (  # noqa: F401
    Scenario,
    SweepSpec,
    default_scenario,
    expand_sweep,
    load_scenario,
    render_scenario,
)

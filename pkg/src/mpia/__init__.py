"""Interference alignment on the K-user MIMO interference channel.

Precoders and receive filters are computed by min-sum message passing on a
factor graph whose messages are Hermitian PSD quadratic forms; classic
iterative leakage minimization falls out as a reduced message schedule. The
package also ships the Monte-Carlo harness and a traffic accountant for a
distributed deployment of the schedule.
"""

from .channel import ChannelSet, random_channel_set
from .distsim import (
    DeviceMapping,
    DeviceTraffic,
    TrafficReport,
    account,
    classify,
    default_mapping,
)
from .graph import FactorGraph, Node, build_graph, neighbors
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    RealizationRecord,
    geometric_mean,
    load_config_file,
    load_mask,
    resolve_schedule,
    run_distsim_report,
    run_montecarlo,
    run_single,
    substream,
)
from .ilm import IlmState, reference_ilm
from .linalg import (
    hermitian_eig,
    is_hermitian_psd,
    is_truncated_unitary,
    nu_min,
    random_gaussian_matrix,
    random_truncated_unitary,
)
from .messages import (
    InnerLoopConfig,
    MessageMonitor,
    MessageStore,
    MissingMessageError,
    PsdMessage,
    extract_belief,
    fn_to_other_var_message,
    fn_to_own_var_message,
    var_to_fn_message,
)
from .metrics import LeakageReport, check_feasibility, ia_residual, leakage
from .schedules import (
    IterationState,
    RunConfig,
    Schedule,
    expand_family,
    ilm_schedule,
    initialize,
    regular_schedule,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSet",
    "DeviceMapping",
    "DeviceTraffic",
    "ExperimentConfig",
    "ExperimentResult",
    "FactorGraph",
    "IlmState",
    "InnerLoopConfig",
    "IterationState",
    "LeakageReport",
    "MessageMonitor",
    "MessageStore",
    "MissingMessageError",
    "Node",
    "PsdMessage",
    "RealizationRecord",
    "RunConfig",
    "Schedule",
    "TrafficReport",
    "account",
    "build_graph",
    "check_feasibility",
    "classify",
    "default_mapping",
    "expand_family",
    "extract_belief",
    "fn_to_other_var_message",
    "fn_to_own_var_message",
    "geometric_mean",
    "hermitian_eig",
    "ia_residual",
    "ilm_schedule",
    "initialize",
    "is_hermitian_psd",
    "is_truncated_unitary",
    "leakage",
    "load_config_file",
    "load_mask",
    "neighbors",
    "nu_min",
    "random_channel_set",
    "random_gaussian_matrix",
    "random_truncated_unitary",
    "reference_ilm",
    "regular_schedule",
    "resolve_schedule",
    "run",
    "run_distsim_report",
    "run_montecarlo",
    "run_single",
    "substream",
    "var_to_fn_message",
]

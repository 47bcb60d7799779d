"""Slotted-time simulator and analysis toolkit for cache-aware task
scheduling between a mobile device and an edge server.

The system model: a device holds a FIFO queue of computation tasks, each
assembled from a random multiset of equally sized contents.  Popular
contents are pinned in a device cache.  In every slot a scheduler may
start the head task (and, when both processors are free, the next one)
on the local processor or ship it to the edge server, paying an uplink
transmission cost that depends on what the cache already holds.  The
shipped-bits / queueing-delay trade-off is steered by a drift-plus-penalty
rule with a single control weight.

Subpackage map:

- ``catalog``   content universe, Zipf popularity, cache membership
- ``workload``  Bernoulli arrivals and random task composition
- ``dynamics``  slot counts, busy counters, the per-slot transition
- ``policy``    feasible action sets and the scheduling rules
- ``engine``    the simulation loop and run metrics
- ``analysis``  closed-form expectations, regimes and bounds
- ``cli``       config files, experiment commands, CSV output
"""

from .catalog import CacheConfig, ContentCatalog, is_cached, zipf_popularity
from .workload import Task, WorkloadConfig, sample_arrival, sample_task
from .dynamics import (
    ACTION_IDLE,
    ACTIONS,
    Action,
    CompletionEvent,
    SystemParams,
    SystemState,
    mec_bits,
    slots_local,
    slots_mec,
    step,
    transmitted_bits,
    uncached_distinct_bits,
)
from .policy import PolicySpec, action_cost, decide, feasible_actions
from .engine import (
    RunMetrics,
    avg_data_per_task,
    avg_queue_length,
    little_delay,
    mean_delay_slots,
    run_simulation,
)
from .analysis import (
    RegimeReport,
    SlotMeanEstimate,
    drift_bound_constant,
    estimate_slot_means,
    expected_local_bits,
    expected_mec_bits,
    optimal_average_data,
    optimality_gap_bound,
    uniform_k_dist,
)
from .errors import ConfigError, ContractViolation, MetricUndefined

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "ACTION_IDLE",
    "Action",
    "CacheConfig",
    "CompletionEvent",
    "ConfigError",
    "ContentCatalog",
    "ContractViolation",
    "MetricUndefined",
    "PolicySpec",
    "RegimeReport",
    "RunMetrics",
    "SlotMeanEstimate",
    "SystemParams",
    "SystemState",
    "Task",
    "WorkloadConfig",
    "action_cost",
    "avg_data_per_task",
    "avg_queue_length",
    "decide",
    "drift_bound_constant",
    "estimate_slot_means",
    "expected_local_bits",
    "expected_mec_bits",
    "feasible_actions",
    "is_cached",
    "little_delay",
    "mean_delay_slots",
    "mec_bits",
    "optimal_average_data",
    "optimality_gap_bound",
    "run_simulation",
    "sample_arrival",
    "sample_task",
    "slots_local",
    "slots_mec",
    "step",
    "transmitted_bits",
    "uncached_distinct_bits",
    "uniform_k_dist",
    "zipf_popularity",
]

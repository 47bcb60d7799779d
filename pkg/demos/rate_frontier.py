"""
Trading link rate against CPU and cache
=======================================

For a fixed delay target the three resources are interchangeable: a
faster device CPU or a bigger cache lowers the link rate needed to hit
the target.  The frontier search bisects over the rate at each (cpu,
cache) corner, re-simulating until the measured mean delay lands inside
the tolerance band.
"""

from mecsched.cli import cmd_frontier
from mecsched.config import ExperimentConfig

config = ExperimentConfig(
    arrival_prob=0.2,
    v_param=0.0,          # pure delay mode for the probes
    horizon_slots=8000,
    seeds=[0],
).validate()

rows = cmd_frontier(
    config,
    target_delay_s=0.6,
    delay_tolerance_s=0.05,
    f_values=[1e9, 2e9, 4e9],
    m_values=[0, 200],
    rate_lo=1.5e8,
    rate_hi=2e10,
    max_iter=16,
)

print("cpu        cache   required rate     achieved delay")
for row in rows:
    rate = row["required_rate_bps"]
    print(
        f"{row['f_local_hz']:8.2g}   {row['cache_m']:5.0f}   "
        f"{rate / 1e6:9.1f} Mbps   {row['achieved_delay_s'] * 1e3:7.1f} ms"
        f"   [{row['status']}]"
    )
print("\nrate needed falls along both axes: compute, caching, and the link")
print("substitute for one another at a fixed latency target")

#!/usr/bin/env python3
"""Run the full checker suite on seeded random traces.

For each trace the harness simulates greedy, solves the offline optimum,
replays that schedule through the same engine, and then mechanically checks
every identity and inequality the competitive analysis rests on: counter
conservation, the nonnegative surplus potentials, the deficit bounds, the
upper-bound family, the potential descent, and the ratio bound itself.
"""

import random

from mqsim.adversary import random_trace
from mqsim.analysis import format_report, verify_all
from mqsim.model import QueueCapacities, append_drain, validate_profile

CONFIGS = [
    ((1, 2), (1, 1)),
    ((1, 2, 5), (1, 1, 1)),
    ((1, 3, 4, 10), (2, 1, 2, 1)),
]

if __name__ == "__main__":
    rng = random.Random(2024)
    for values, caps_t in CONFIGS:
        profile = validate_profile(values)
        caps = QueueCapacities(caps_t)
        trace = append_drain(random_trace(rng, profile.m, 14))
        print("=" * 64)
        print(f"values {values}, capacities {caps_t}")
        print(f"trace events: {trace.events}")
        print("-" * 64)
        report = verify_all(trace, caps, profile)
        print(format_report(report), end="")
        print()

    # and a quick volume check: several hundred traces, every verdict true
    failures = 0
    for values, caps_t in CONFIGS:
        profile = validate_profile(values)
        caps = QueueCapacities(caps_t)
        for _ in range(500):
            trace = append_drain(random_trace(rng, profile.m, rng.randint(0, 12)))
            if not verify_all(trace, caps, profile).all_ok:
                failures += 1
    print("=" * 64)
    print(f"volume check: 1500 random drained traces, {failures} failures")

#!/usr/bin/env python3
"""Step through one instructive trace, ledger by ledger.

The trace A1 A2 S A1 S S with values (1, 2) and unit capacities is the
smallest example where greedy loses ground: at the first send it transmits
the class-2 packet, keeps its class-1 queue full, and must reject the second
class-1 arrival.  The offline optimum transmits class 1 first, accepts
everything, and earns 4 against greedy's 3.
"""

from mqsim.engine import ledger_to_tsv, replay_schedule, run_greedy
from mqsim.model import QueueCapacities, parse_trace, validate_profile
from mqsim.opt import opt_bruteforce, opt_search

TRACE_TEXT = """\
A 1
A 2
S
A 1
S
S
"""

if __name__ == "__main__":
    profile = validate_profile((1, 2))
    caps = QueueCapacities((1, 1))
    trace = parse_trace(TRACE_TEXT)

    print("trace:")
    print(TRACE_TEXT)

    greedy_ledger, greedy_schedule = run_greedy(trace, caps, profile)
    print("greedy ledger (A = accepted, delta = transmitted, q = buffered):")
    print(ledger_to_tsv(trace, greedy_ledger))
    print(f"greedy schedule: {greedy_schedule.to_text()}")
    print(f"greedy benefit:  {greedy_ledger.benefit_transmitted}")
    print()

    result = opt_search(trace, caps, profile)
    print(f"optimal schedule: {result.schedule.to_text()}")
    print(f"optimal benefit:  {result.benefit}")
    print(f"brute-force check: {opt_bruteforce(trace, caps, profile)}")
    print()

    opt_ledger = replay_schedule(trace, caps, profile, result.schedule)
    print("optimal ledger (same engine, different schedule):")
    print(ledger_to_tsv(trace, opt_ledger))

    ratio = result.benefit / greedy_ledger.benefit_transmitted
    print(f"ratio: {ratio}  (proven bound 3/2 for these values)")

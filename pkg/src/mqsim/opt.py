"""Exact offline-optimal benefit and schedule for a trace.

Admission is forced for every diligent policy, so the offline optimum only
chooses which nonempty queue to serve at each send.  Future benefit depends
only on the remaining events and the current occupancy vector, which makes a
layered dynamic program over (event index, occupancy) exact.  Benefit-equal
choices are broken toward the highest class index so the returned schedule
matches greedy's top-class acceptance count deterministically.

`opt_bruteforce` is the independent oracle: plain recursion over every
diligent choice, no shared state machinery, Fraction arithmetic throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engine import Schedule, check_inputs
from .model import MQSimError, QueueCapacities, SEND, Trace, ValueProfile

DEFAULT_STATE_CAP = 10**7


class StateSpaceExceeded(MQSimError):
    def __init__(self, limit: int, needed: int):
        super().__init__(f"needs {needed} DP cells, cap is {limit}")
        self.limit = limit
        self.needed = needed


@dataclass(frozen=True)
class OptResult:
    benefit: Fraction
    schedule: Schedule
    states_explored: int


class _StateSpace:
    """Occupancy vectors of one capacity profile, with precomputed transitions.

    States are mixed-radix indices over [0, B_1] x ... x [0, B_m]; index 0 is
    the all-empty vector.  Benefits are scaled integers (profile weights), so
    comparisons are exact and cheap.
    """

    def __init__(self, caps: tuple[int, ...], weights: tuple[int, ...]):
        self.caps = caps
        self.weights = weights
        m = len(caps)
        radix = [b + 1 for b in caps]
        size = 1
        for r in radix:
            size *= r
        self.size = size

        states = []
        occ = [0] * m
        for idx in range(size):
            states.append(tuple(occ))
            for c in range(m - 1, -1, -1):
                if occ[c] < caps[c]:
                    occ[c] += 1
                    break
                occ[c] = 0
        self.states = states

        stride = [0] * m
        acc = 1
        for c in range(m - 1, -1, -1):
            stride[c] = acc
            acc *= radix[c]

        # arrive_to[c][s]: state after a class-(c+1) arrival (self when full)
        self.arrive_to = [
            [s + (stride[c] if states[s][c] < caps[c] else 0) for s in range(size)]
            for c in range(m)
        ]
        # send_moves[s]: (weight, successor, class) per nonempty class, ascending
        self.send_moves = [
            [
                (weights[c], s - stride[c], c + 1)
                for c in range(m)
                if states[s][c] > 0
            ]
            for s in range(size)
        ]

    def best_scaled(self, events: tuple[int, ...]) -> int:
        """Max scaled benefit over all diligent schedules (rolling backward DP)."""
        val = [0] * self.size
        for ev in reversed(events):
            if ev == SEND:
                nxt = []
                for s in range(self.size):
                    moves = self.send_moves[s]
                    if moves:
                        nxt.append(max(w + val[s2] for w, s2, _ in moves))
                    else:
                        nxt.append(val[s])
                val = nxt
            else:
                to = self.arrive_to[ev - 1]
                val = [val[to[s]] for s in range(self.size)]
        return val[0]

    def tables(self, events: tuple[int, ...]) -> list[list[int]]:
        """Full backward DP tables val[i][s] for schedule extraction."""
        n = len(events)
        tables = [None] * (n + 1)
        tables[n] = [0] * self.size
        for i in range(n - 1, -1, -1):
            ev = events[i]
            nxt = tables[i + 1]
            if ev == SEND:
                cur = []
                for s in range(self.size):
                    moves = self.send_moves[s]
                    if moves:
                        cur.append(max(w + nxt[s2] for w, s2, _ in moves))
                    else:
                        cur.append(nxt[s])
                tables[i] = cur
            else:
                to = self.arrive_to[ev - 1]
                tables[i] = [nxt[to[s]] for s in range(self.size)]
        return tables


def opt_search(
    trace: Trace,
    caps: QueueCapacities,
    profile: ValueProfile,
    state_cap: int = DEFAULT_STATE_CAP,
) -> OptResult:
    """Optimal benefit and one optimal diligent schedule for a drained trace.

    Ties at a send are broken toward the highest class index, which keeps the
    returned schedule's top-class acceptances equal to greedy's.  Raises
    StateSpaceExceeded when the a-priori cell count prod(B_i + 1) * |events|
    exceeds `state_cap`; the cap is a guard, never an approximation.
    """
    check_inputs(trace, caps, profile)
    if not trace.drained:
        raise ValueError("opt_search needs a drained trace; use append_drain first")

    cells = 1
    for b in caps.caps:
        cells *= b + 1
    cells *= max(len(trace.events), 1)
    if cells > state_cap:
        raise StateSpaceExceeded(state_cap, cells)

    space = _StateSpace(caps.caps, profile.weights)
    tables = space.tables(trace.events)

    choices: list[int | None] = []
    s = 0
    for i, ev in enumerate(trace.events):
        if ev == SEND:
            moves = space.send_moves[s]
            if not moves:
                choices.append(None)
                continue
            nxt = tables[i + 1]
            best_cls = None
            best_s = s
            best_val = -1
            for w, s2, cls in moves:
                cand = w + nxt[s2]
                if cand >= best_val:  # ascending scan: ties land on highest class
                    best_val = cand
                    best_cls = cls
                    best_s = s2
            choices.append(best_cls)
            s = best_s
        else:
            s = space.arrive_to[ev - 1][s]

    benefit = Fraction(tables[0][0], profile.scale)
    states = space.size * (len(trace.events) + 1)
    return OptResult(benefit=benefit, schedule=Schedule(tuple(choices)), states_explored=states)


def opt_benefit(
    trace: Trace,
    caps: QueueCapacities,
    profile: ValueProfile,
    state_cap: int = DEFAULT_STATE_CAP,
) -> Fraction:
    """Optimal benefit only (no schedule); same DP, rolling storage."""
    check_inputs(trace, caps, profile)
    if not trace.drained:
        raise ValueError("opt_benefit needs a drained trace; use append_drain first")
    cells = 1
    for b in caps.caps:
        cells *= b + 1
    if cells * max(len(trace.events), 1) > state_cap:
        raise StateSpaceExceeded(state_cap, cells * max(len(trace.events), 1))
    space = _StateSpace(caps.caps, profile.weights)
    return Fraction(space.best_scaled(trace.events), profile.scale)


def opt_bruteforce(
    trace: Trace, caps: QueueCapacities, profile: ValueProfile
) -> Fraction:
    """Independent oracle: enumerate every diligent choice at every send.

    No memoization and no shared transition tables; intended for small
    instances (roughly up to a dozen sends).
    """
    check_inputs(trace, caps, profile)
    events = trace.events
    B = caps.caps
    values = profile.values
    m = profile.m
    zero = Fraction(0)

    def best_from(i: int, q: list[int]) -> Fraction:
        if i == len(events):
            return zero
        ev = events[i]
        if ev != SEND:
            c = ev - 1
            if q[c] < B[c]:
                q[c] += 1
                result = best_from(i + 1, q)
                q[c] -= 1
                return result
            return best_from(i + 1, q)
        if not any(q):
            return best_from(i + 1, q)
        best = None
        for c in range(m):
            if q[c]:
                q[c] -= 1
                cand = values[c] + best_from(i + 1, q)
                q[c] += 1
                if best is None or cand > best:
                    best = cand
        return best

    return best_from(0, [0] * m)

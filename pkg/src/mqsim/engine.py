"""Deterministic simulation of diligent policies over a trace.

One runner materializes the full per-event ledger for any diligent schedule;
the online greedy policy is simply the schedule that always transmits from the
highest-indexed nonempty queue.  Admission is never a choice: a diligent
policy accepts exactly when the destination queue has a vacancy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import MQSimError, QueueCapacities, SEND, Trace, ValueProfile

ACCEPT = "accept"
REJECT = "reject"
TRANSMIT = "transmit"
IDLE = "idle"

OccupancyVector = tuple[int, ...]


class ClassOutOfRange(MQSimError):
    pass


class DiligenceViolation(MQSimError):
    def __init__(self, send_index: int, message: str):
        super().__init__(f"send {send_index}: {message}")
        self.send_index = send_index


@dataclass(frozen=True)
class Action:
    kind: str
    cls: int | None = None


@dataclass(frozen=True)
class LedgerEntry:
    """Cumulative counters just after one event.

    `accepted[h-1]` / `transmitted[h-1]` / `occupancy[h-1]` are the class-h
    acceptance count, transmission count, and queue occupancy; the
    conservation identity accepted = transmitted + occupancy holds per class
    at every entry.
    """

    event_index: int
    action: Action
    accepted: tuple[int, ...]
    transmitted: tuple[int, ...]
    occupancy: OccupancyVector


@dataclass(frozen=True)
class Ledger:
    """Per-event history of one diligent policy.

    `entries[0]` is the initial null entry (all counters zero); `entries[i]`
    describes the state just after the i-th trace event.  On a drained trace
    the two benefit figures coincide.
    """

    entries: tuple[LedgerEntry, ...]
    benefit_transmitted: Fraction
    benefit_accepted: Fraction

    @property
    def final(self) -> LedgerEntry:
        return self.entries[-1]


@dataclass(frozen=True)
class Schedule:
    """One class choice (or None for idle) per send event of a trace."""

    choices: tuple[int | None, ...]

    def to_text(self) -> str:
        return ",".join("-" if c is None else str(c) for c in self.choices)

    @classmethod
    def from_text(cls, text: str) -> "Schedule":
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(None if t == "-" else int(t) for t in text.split(",")))


def check_inputs(trace: Trace, caps: QueueCapacities, profile: ValueProfile) -> None:
    """Reject mismatched dimensions or arrival classes outside the profile."""
    if caps.m != profile.m:
        raise MQSimError(f"{caps.m} capacities given for {profile.m} classes")
    if trace.max_class > profile.m:
        raise ClassOutOfRange(
            f"trace arrives class {trace.max_class} but profile has m={profile.m}"
        )


def _run(
    trace: Trace,
    caps: QueueCapacities,
    profile: ValueProfile,
    schedule: Schedule | None,
) -> tuple[Ledger, Schedule]:
    check_inputs(trace, caps, profile)
    m = profile.m
    B = caps.caps
    if schedule is not None and len(schedule.choices) != trace.sends:
        raise MQSimError(
            f"schedule has {len(schedule.choices)} choices for {trace.sends} sends"
        )

    q = [0] * m
    acc = [0] * m
    tx = [0] * m
    zeros = (0,) * m
    entries = [LedgerEntry(0, Action(IDLE), zeros, zeros, zeros)]
    choices: list[int | None] = []
    send_i = 0

    for idx, ev in enumerate(trace.events, start=1):
        if ev == SEND:
            if schedule is None:
                cls = next((c for c in range(m, 0, -1) if q[c - 1]), None)
            else:
                cls = schedule.choices[send_i]
                if cls is None:
                    if any(q):
                        raise DiligenceViolation(send_i, "idle while a queue is nonempty")
                elif not 1 <= cls <= m:
                    raise DiligenceViolation(send_i, f"class {cls} out of range")
                elif q[cls - 1] == 0:
                    raise DiligenceViolation(send_i, f"class {cls} queue is empty")
            send_i += 1
            choices.append(cls)
            if cls is None:
                action = Action(IDLE)
            else:
                q[cls - 1] -= 1
                tx[cls - 1] += 1
                action = Action(TRANSMIT, cls)
        else:
            cls = ev
            if q[cls - 1] < B[cls - 1]:
                q[cls - 1] += 1
                acc[cls - 1] += 1
                action = Action(ACCEPT, cls)
            else:
                action = Action(REJECT, cls)
        entries.append(LedgerEntry(idx, action, tuple(acc), tuple(tx), tuple(q)))

    ledger = Ledger(tuple(entries), profile.benefit(tx), profile.benefit(acc))
    return ledger, Schedule(tuple(choices))


def run_greedy(
    trace: Trace, caps: QueueCapacities, profile: ValueProfile
) -> tuple[Ledger, Schedule]:
    """Simulate the greedy policy: accept whenever there is a vacancy, transmit
    from the highest-indexed nonempty queue, idle only when all queues are empty."""
    return _run(trace, caps, profile, schedule=None)


def replay_schedule(
    trace: Trace, caps: QueueCapacities, profile: ValueProfile, schedule: Schedule
) -> Ledger:
    """Replay an explicit diligent schedule, validating diligence at each send."""
    ledger, _ = _run(trace, caps, profile, schedule)
    return ledger


def greedy_transmit_counts(
    events: tuple[int, ...], caps: tuple[int, ...], m: int
) -> list[int]:
    """Per-class transmission counts of greedy, without building a ledger.

    Fast path for searches; agrees with run_greedy's final transmitted vector.
    """
    q = [0] * m
    tx = [0] * m
    for ev in events:
        if ev == SEND:
            for c in range(m - 1, -1, -1):
                if q[c]:
                    q[c] -= 1
                    tx[c] += 1
                    break
        elif q[ev - 1] < caps[ev - 1]:
            q[ev - 1] += 1
    return tx


def ledger_to_tsv(trace: Trace, ledger: Ledger) -> str:
    """Tab-separated per-event dump: index, event kind, action, A, delta, q."""
    lines = ["# event\tkind\taction\tA\tdelta\tq"]
    for entry in ledger.entries:
        if entry.event_index == 0:
            kind = "init"
        else:
            ev = trace.events[entry.event_index - 1]
            kind = "send" if ev == SEND else f"arrive {ev}"
        action = entry.action.kind
        if entry.action.cls is not None:
            action += f" {entry.action.cls}"
        lines.append(
            "\t".join(
                [
                    str(entry.event_index),
                    kind,
                    action,
                    ",".join(map(str, entry.accepted)),
                    ",".join(map(str, entry.transmitted)),
                    ",".join(map(str, entry.occupancy)),
                ]
            )
        )
    return "\n".join(lines) + "\n"

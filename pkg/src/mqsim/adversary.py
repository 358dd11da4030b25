"""Worst-case search for the greedy policy's empirical competitive ratio.

Exhaustive mode enumerates every event string over {A1..Am, S} up to a length
bound; random mode samples seeded uniform strings.  Each candidate is drained
before evaluation so benefits are well-defined totals.  Any ratio above the
proven bound aborts the search with a falsification report; it is never
silently clamped.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import get_context

from .engine import greedy_transmit_counts
from .model import (
    MQSimError,
    QueueCapacities,
    SEND,
    Trace,
    ValueProfile,
    compute_c,
    trace_to_text,
)
from .opt import _StateSpace

DEFAULT_BUDGET = 2_000_000
_CHUNK = 20_000  # raw indices per task; fixed so chunking is jobs-independent


class BudgetExceeded(MQSimError):
    def __init__(self, budget: int, needed: int):
        super().__init__(f"enumeration needs {needed} strings, budget is {budget}")
        self.budget = budget
        self.needed = needed


class BoundFalsified(MQSimError):
    """A concrete trace beat the proven ratio bound.  Never expected."""

    def __init__(self, trace: Trace, ratio: Fraction, bound: Fraction):
        super().__init__(
            f"ratio {ratio} exceeds bound {bound} on trace:\n{trace_to_text(trace)}"
        )
        self.trace = trace
        self.ratio = ratio
        self.bound = bound


@dataclass(frozen=True)
class SearchResult:
    worst_trace: Trace
    worst_ratio: Fraction
    traces_evaluated: int
    seed: int | None = None


def _evaluate(
    events: tuple[int, ...],
    caps: tuple[int, ...],
    weights: tuple[int, ...],
    space: _StateSpace,
) -> tuple[int, int] | None:
    """(opt, greedy) scaled benefits of a drained event tuple; None when
    greedy earns nothing (the optimum is then also zero)."""
    m = len(caps)
    tx = greedy_transmit_counts(events, caps, m)
    g = sum(w * t for w, t in zip(weights, tx))
    if g == 0:
        return None
    return space.best_scaled(events), g


def _decode(index: int, length: int, m: int) -> tuple[int, ...]:
    """Raw string for a base-(m+1) index, most significant digit first.

    Digits 0..m-1 are arrivals of classes 1..m, digit m is a send, so numeric
    order equals lexicographic order over (A1 < ... < Am < S).
    """
    events = [0] * length
    for pos in range(length - 1, -1, -1):
        index, digit = divmod(index, m + 1)
        events[pos] = SEND if digit == m else digit + 1
    return tuple(events)


def _drain_events(events: tuple[int, ...]) -> tuple[int, ...]:
    k = sum(1 for ev in events if ev != SEND)
    return events + (SEND,) * k


def _scan_range(
    length: int,
    start: int,
    stop: int,
    m: int,
    caps: tuple[int, ...],
    weights: tuple[int, ...],
    bound_scaled: tuple[int, int],
) -> tuple[tuple[int, int, tuple[int, ...]] | None, int, tuple[int, ...] | None]:
    """Best ratio over one index range of raw strings of a fixed length.

    Returns (best (num, den, drained events) or None, evaluated count,
    falsifying drained events or None).  Pruning: strings starting with a
    send or ending with an arrival are skipped; their drained behavior is
    covered by shorter or send-terminated strings.
    """
    space = _StateSpace(caps, weights)
    bn, bd = bound_scaled
    best: tuple[int, int, tuple[int, ...]] | None = None
    evaluated = 0
    for index in range(start, stop):
        raw = _decode(index, length, m)
        if raw and (raw[0] == SEND or raw[-1] != SEND):
            continue
        drained = _drain_events(raw)
        evaluated += 1
        scored = _evaluate(drained, caps, weights, space)
        if scored is None:
            continue
        o, g = scored
        if o * bd > bn * g:
            return best, evaluated, drained
        if best is None or o * best[1] > best[0] * g:
            best = (o, g, drained)
    return best, evaluated, None


def _scan_task(args) -> tuple[tuple[int, int, tuple[int, ...]] | None, int, tuple[int, ...] | None]:
    return _scan_range(*args)


def exhaustive_worst(
    profile: ValueProfile,
    caps: QueueCapacities,
    max_len: int,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> SearchResult:
    """Maximum drained ratio over every event string of length <= max_len.

    Deterministic: the reported trace is the first maximum achiever in
    length-then-lexicographic order, independent of `jobs`.  `traces_evaluated`
    counts candidates that survived pruning (including zero-benefit ones).
    """
    m = profile.m
    total = sum((m + 1) ** length for length in range(max_len + 1))
    if total > budget:
        raise BudgetExceeded(budget, total)
    bound = compute_c(profile).upper
    bound_scaled = (bound.numerator, bound.denominator)

    tasks = []
    for length in range(max_len + 1):
        span = (m + 1) ** length
        for start in range(0, span, _CHUNK):
            tasks.append(
                (length, start, min(start + _CHUNK, span), m, caps.caps,
                 profile.weights, bound_scaled)
            )

    if jobs > 1:
        with get_context("fork").Pool(jobs) as pool:
            results = pool.map(_scan_task, tasks, chunksize=1)
    else:
        results = [_scan_task(task) for task in tasks]

    best: tuple[int, int, tuple[int, ...]] | None = None
    evaluated = 0
    for chunk_best, chunk_count, falsified in results:
        evaluated += chunk_count
        if falsified is not None:
            o, g = _evaluate(falsified, caps.caps, profile.weights,
                             _StateSpace(caps.caps, profile.weights))
            raise BoundFalsified(Trace(falsified), Fraction(o, g), bound)
        if chunk_best is None:
            continue
        if best is None or chunk_best[0] * best[1] > best[0] * chunk_best[1]:
            best = chunk_best

    if best is None:
        return SearchResult(Trace(()), Fraction(1), evaluated)
    o, g, events = best
    return SearchResult(Trace(events), Fraction(o, g), evaluated)


def random_trace(
    rng: random.Random, m: int, length: int, arrive_prob: float = 0.5
) -> Trace:
    """Uniform raw event string: arrive with probability `arrive_prob`
    (class uniform in [1, m]), send otherwise.  Not drained."""
    events = tuple(
        rng.randint(1, m) if rng.random() < arrive_prob else SEND
        for _ in range(length)
    )
    return Trace(events)


def random_worst(
    profile: ValueProfile,
    caps: QueueCapacities,
    length: int,
    samples: int,
    seed: int,
    arrive_prob: float = 0.5,
) -> SearchResult:
    """Maximum drained ratio over `samples` seeded random strings of `length`
    events.  Identical seed and parameters give an identical result."""
    m = profile.m
    rng = random.Random(seed)
    space = _StateSpace(caps.caps, profile.weights)
    bound = compute_c(profile).upper
    best: tuple[int, int, tuple[int, ...]] | None = None
    for _ in range(samples):
        raw = random_trace(rng, m, length, arrive_prob)
        drained = _drain_events(raw.events)
        scored = _evaluate(drained, caps.caps, profile.weights, space)
        if scored is None:
            continue
        o, g = scored
        if Fraction(o, g) > bound:
            raise BoundFalsified(Trace(drained), Fraction(o, g), bound)
        if best is None or o * best[1] > best[0] * g:
            best = (o, g, drained)
    if best is None:
        return SearchResult(Trace(()), Fraction(1), samples, seed=seed)
    o, g, events = best
    return SearchResult(Trace(events), Fraction(o, g), samples, seed=seed)

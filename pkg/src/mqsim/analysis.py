"""Derived counters of a greedy/optimal ledger pair and the full checker suite.

Everything here is a mechanical check on concrete traces: per-event surplus
potentials, end-of-trace deficit and tail-sum inequalities, the upper-bound
family with its recursive and explicit forms, the weighted potential descent,
and the competitive-ratio bound itself.  All comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .engine import Ledger, run_greedy, replay_schedule
from .model import (
    MQSimError,
    QueueCapacities,
    SEND,
    Trace,
    ValueProfile,
    compute_c,
    doubling_tail,
)
from .opt import DEFAULT_STATE_CAP, opt_search

Matrix = tuple[tuple[int, ...], ...]


class LedgerMismatch(MQSimError):
    pass


class MTooSmall(MQSimError):
    pass


@dataclass(frozen=True)
class Verdict:
    """Outcome of one checked statement, with first-failure coordinates."""

    name: str
    ok: bool
    h: int | None = None
    event: int | None = None

    def line(self) -> str:
        parts = [f"verdict {self.name} {'true' if self.ok else 'false'}"]
        if self.h is not None:
            parts.append(f"h={self.h}")
        if self.event is not None:
            parts.append(f"e={self.event}")
        return " ".join(parts)


@dataclass(frozen=True)
class ComparativeReport:
    """Greedy-vs-optimal quantities of one drained trace plus all verdicts.

    `xi` and `phi` have one row per class h in [1, m-1] and one column per
    event including the initial null event.  `D`, `S` are end-of-trace
    (deficit per class, greedy acceptance tail sums); `U` the upper-bound
    family U_1..U_{m-1}; `delta` the weighted potentials (empty when m = 2).
    """

    m: int
    xi: Matrix
    phi: Matrix
    D: tuple[int, ...]
    S: tuple[int, ...]
    U: tuple[int, ...]
    delta: tuple[Fraction, ...]
    greedy_benefit: Fraction
    opt_benefit: Fraction
    ratio: Fraction
    bound: Fraction
    verdicts: dict[str, Verdict] = field(compare=False)

    @property
    def all_ok(self) -> bool:
        return all(v.ok for v in self.verdicts.values())

    def verdict_lines(self) -> list[str]:
        return [v.line() for v in self.verdicts.values()]


def _check_paired(greedy: Ledger, opt: Ledger) -> int:
    if len(greedy.entries) != len(opt.entries):
        raise LedgerMismatch(
            f"event counts differ: {len(greedy.entries) - 1} vs {len(opt.entries) - 1}"
        )
    m = len(greedy.entries[0].accepted)
    if len(opt.entries[0].accepted) != m:
        raise LedgerMismatch("class counts differ")
    return m


def compute_xi(greedy: Ledger, opt: Ledger) -> Matrix:
    """Transmit surplus xi_h(e_i) = sum_{l>=h} delta_l(e_i) - delta*_h(e_i),
    one row per h in [1, m-1], one column per event including the null event."""
    m = _check_paired(greedy, opt)
    return tuple(
        tuple(
            sum(ge.transmitted[h - 1 :]) - oe.transmitted[h - 1]
            for ge, oe in zip(greedy.entries, opt.entries)
        )
        for h in range(1, m)
    )


def compute_phi(greedy: Ledger, opt: Ledger) -> Matrix:
    """Accept surplus phi_h(e_i) = sum_{l>=h} A_l(e_i) - A*_h(e_i); same shape as xi."""
    m = _check_paired(greedy, opt)
    return tuple(
        tuple(
            sum(ge.accepted[h - 1 :]) - oe.accepted[h - 1]
            for ge, oe in zip(greedy.entries, opt.entries)
        )
        for h in range(1, m)
    )


def _matrix_nonneg(matrix: Matrix, name: str) -> Verdict:
    for row_idx, row in enumerate(matrix):
        for event_idx, value in enumerate(row):
            if value < 0:
                return Verdict(name, False, h=row_idx + 1, event=event_idx)
    return Verdict(name, True)


def check_xi_nonneg(xi: Matrix) -> Verdict:
    return _matrix_nonneg(xi, "transmit_surplus_nonneg")


def check_phi_nonneg(phi: Matrix) -> Verdict:
    return _matrix_nonneg(phi, "accept_surplus_nonneg")


def _check_conservation(ledger: Ledger, name: str) -> Verdict:
    for entry in ledger.entries:
        for h in range(len(entry.accepted)):
            if entry.accepted[h] != entry.transmitted[h] + entry.occupancy[h]:
                return Verdict(name, False, h=h + 1, event=entry.event_index)
    return Verdict(name, True)


def check_surplus_monotonicity(
    trace: Trace, greedy: Ledger, opt: Ledger, xi: Matrix
) -> tuple[Verdict, Verdict]:
    """Per-send monotonicity of the transmit surplus.

    Between consecutive sends s_{j-1} and s_j (s_0 is the null event),
    xi_h may not drop when (a) greedy had any packet of class >= h buffered
    just after s_{j-1} (checked for j >= 2), or (b) the optimal schedule's
    class-h queue was empty just after s_{j-1} (checked for j >= 1).
    """
    m = len(greedy.entries[0].accepted)
    sends = [0] + [i for i, ev in enumerate(trace.events, start=1) if ev == SEND]
    backlogged: Verdict | None = None
    opt_empty: Verdict | None = None
    for h in range(1, m):
        row = xi[h - 1]
        for j in range(1, len(sends)):
            prev, cur = sends[j - 1], sends[j]
            if j >= 2 and backlogged is None:
                if sum(greedy.entries[prev].occupancy[h - 1 :]) > 0 and row[cur] < row[prev]:
                    backlogged = Verdict(
                        "transmit_surplus_monotone_backlogged", False, h=h, event=cur
                    )
            if opt_empty is None:
                if opt.entries[prev].occupancy[h - 1] == 0 and row[cur] < row[prev]:
                    opt_empty = Verdict(
                        "transmit_surplus_monotone_opt_empty", False, h=h, event=cur
                    )
    if backlogged is None:
        backlogged = Verdict("transmit_surplus_monotone_backlogged", True)
    if opt_empty is None:
        opt_empty = Verdict("transmit_surplus_monotone_opt_empty", True)
    return backlogged, opt_empty


def check_aggregate_deficit(greedy: Ledger, opt: Ledger) -> Verdict:
    """Aggregate acceptance bound: for every h,
    sum_{l>=h} (A*_l - A_l) <= sum_{l>=h} A_l at end of trace."""
    m = _check_paired(greedy, opt)
    A = greedy.final.accepted
    Astar = opt.final.accepted
    for h in range(1, m + 1):
        tail_a = sum(A[h - 1 :])
        tail_d = sum(Astar[h - 1 :]) - tail_a
        if tail_d > tail_a:
            return Verdict("aggregate_deficit_bound", False, h=h)
    return Verdict("aggregate_deficit_bound", True)


def suffix_sums(A: Sequence[int]) -> tuple[int, ...]:
    """Tail sums S_h = A_h + ... + A_m for h in [1, m]."""
    out = []
    total = 0
    for a in reversed(A):
        total += a
        out.append(total)
    return tuple(reversed(out))


def check_D_bounds(D: Sequence[int], S: Sequence[int]) -> Verdict:
    """End-of-trace deficit bounds: D_h <= S_{h+1} for h in [1, m-1] and
    D_h + ... + D_{m-1} <= S_h for h in [1, m-2]."""
    m = len(D)
    for h in range(1, m):
        if D[h - 1] > S[h]:
            return Verdict("deficit_tail_bound", False, h=h)
    return Verdict("deficit_tail_bound", True)


def check_D_sum_bounds(D: Sequence[int], S: Sequence[int]) -> Verdict:
    m = len(D)
    for h in range(1, m - 1):
        if sum(D[h - 1 : m - 1]) > S[h - 1]:
            return Verdict("deficit_sum_bound", False, h=h)
    return Verdict("deficit_sum_bound", True)


def u_recursion(A: Sequence[int]) -> tuple[int, ...]:
    """The bound family by its recursion: U_{m-1} = A_m and
    U_h = min(A_h, U_{h+1}) + S_{h+1} going down to h = 1."""
    m = len(A)
    if m < 2:
        raise MTooSmall(f"need m >= 2, got {m}")
    S = suffix_sums(A)
    U = [0] * (m - 1)
    U[m - 2] = A[m - 1]
    for h in range(m - 2, 0, -1):
        U[h - 1] = min(A[h - 1], U[h]) + S[h]
    return tuple(U)


def u_candidates(m: int, h: int) -> tuple[tuple[int, ...], ...]:
    """S-index lists of the m-h explicit upper bounds on D_h + ... + D_{m-1}.

    Each candidate is a tuple of 1-based S indices to sum: the chains
    (S_{h+1}, ..., S_{j+1}, S_{j+1}) for j in [h, m-3], then
    (S_{h+1}, ..., S_m), then (S_h,) when h <= m-2.
    """
    if not 1 <= h <= m - 1:
        raise ValueError(f"h must be in [1, {m - 1}], got {h}")
    cands = []
    for j in range(h, m - 2):
        cands.append(tuple(range(h + 1, j + 2)) + (j + 1,))
    cands.append(tuple(range(h + 1, m + 1)))
    if h <= m - 2:
        cands.append((h,))
    return tuple(cands)


def u_explicit(A: Sequence[int]) -> tuple[int, ...]:
    """The bound family by direct enumeration of its explicit candidates."""
    m = len(A)
    if m < 2:
        raise MTooSmall(f"need m >= 2, got {m}")
    S = suffix_sums(A)
    return tuple(
        min(sum(S[idx - 1] for idx in cand) for cand in u_candidates(m, h))
        for h in range(1, m)
    )


def check_u_bounds(D: Sequence[int], U: Sequence[int]) -> Verdict:
    """D_h + ... + D_{m-1} <= U_h for every h in [1, m-1]."""
    m = len(D)
    for h in range(1, m):
        if sum(D[h - 1 : m - 1]) > U[h - 1]:
            return Verdict("u_bounds_hold", False, h=h)
    return Verdict("u_bounds_hold", True)


def compute_delta(
    profile: ValueProfile,
    c_star: Fraction,
    U: Sequence[int],
    S: Sequence[int],
) -> tuple[Fraction, ...]:
    """Weighted potentials Delta_1..Delta_{m-2}.

    Delta_h couples U_h and S_h through doubling-tail coefficients (with the
    v_0 = 0 convention and empty sums for h <= 2) plus the telescoping
    (v_{k+1} - v_k) U_{k+1} tail.  Defined only for m >= 3.
    """
    m = profile.m
    if m < 3:
        raise MTooSmall(f"delta potentials need m >= 3, got {m}")
    values = profile.values

    def v(i: int) -> Fraction:
        return values[i - 1] if i >= 1 else Fraction(0)

    deltas = []
    for h in range(1, m - 1):
        tail = doubling_tail(values, h - 1)
        coef_u = (v(h) + tail) - c_star * (v(h - 1) + tail)
        coef_s = (v(h - 1) + tail) - c_star * tail
        slope = sum(
            ((v(k + 1) - v(k)) * U[k] for k in range(h, m - 1)), Fraction(0)
        )
        deltas.append(coef_u * U[h - 1] + coef_s * S[h - 1] + slope)
    return tuple(deltas)


def check_coefficient_signs(profile: ValueProfile, c_star: Fraction) -> Verdict:
    """(v_i + T_i) - c_star * (v_{i+1} + T_i) <= 0 for every i in [1, m-1]."""
    values = profile.values
    for i in range(1, profile.m):
        tail = doubling_tail(values, i)
        if (values[i - 1] + tail) - c_star * (values[i] + tail) > 0:
            return Verdict("coefficient_signs", False, h=i)
    return Verdict("coefficient_signs", True)


def check_delta_chain(
    profile: ValueProfile, A: Sequence[int], D: Sequence[int]
) -> Verdict:
    """Descent of the weighted potentials, ending at the ratio bound's numerator.

    Checks the entry inequality sum_h v_h D_h <= Delta_1, each link
    Delta_h <= c* v_h A_h + Delta_{h+1}, the final link bounding Delta_{m-2}
    by c* (v_{m-2} A_{m-2} + v_{m-1} A_{m-1} + v_m A_m), the coefficient sign
    condition, and the chain's conclusion sum v_h D_h <= c* sum v_h A_h.
    For m = 2 the potentials are undefined and the degenerate route
    v_1 D_1 <= v_1 U_1 = v_1 A_2 <= c* (v_1 A_1 + v_2 A_2) is checked instead.
    """
    m = profile.m
    values = profile.values
    report = compute_c(profile)
    c_star = report.c_star
    name = "potential_chain"

    weighted_D = sum(
        (values[h - 1] * D[h - 1] for h in range(1, m)), Fraction(0)
    )
    weighted_A = sum(
        (values[h - 1] * A[h - 1] for h in range(1, m + 1)), Fraction(0)
    )
    U = u_recursion(A)

    if m == 2:
        ok = weighted_D <= values[0] * U[0] and values[0] * U[0] <= c_star * weighted_A
        return Verdict(name, ok)

    if not check_coefficient_signs(profile, c_star).ok:
        return Verdict(name, False)

    S = suffix_sums(A)
    delta = compute_delta(profile, c_star, U, S)
    if weighted_D > delta[0]:
        return Verdict(name, False)
    for h in range(1, m - 2):
        if delta[h - 1] > c_star * values[h - 1] * A[h - 1] + delta[h]:
            return Verdict(name, False, h=h)
    last = c_star * sum(
        (values[h - 1] * A[h - 1] for h in range(m - 2, m + 1)), Fraction(0)
    )
    if delta[m - 3] > last:
        return Verdict(name, False, h=m - 2)
    if weighted_D > c_star * weighted_A:
        return Verdict(name, False)
    return Verdict(name, True)


def verify_ratio_bound(
    trace: Trace,
    caps: QueueCapacities,
    profile: ValueProfile,
    state_cap: int = DEFAULT_STATE_CAP,
) -> tuple[Fraction, Fraction, Verdict]:
    """Ratio of optimal to greedy benefit against the proven bound 1 + c*.

    When both benefits are zero the ratio is reported as 1 and the verdict is
    vacuously true.
    """
    if not trace.drained:
        raise ValueError("verify_ratio_bound needs a drained trace; use append_drain first")
    greedy_ledger, _ = run_greedy(trace, caps, profile)
    opt_result = opt_search(trace, caps, profile, state_cap=state_cap)
    bound = compute_c(profile).upper
    g = greedy_ledger.benefit_transmitted
    o = opt_result.benefit
    if g == 0:
        return Fraction(1), bound, Verdict("ratio_bound", o == 0)
    ratio = o / g
    return ratio, bound, Verdict("ratio_bound", ratio <= bound)


def verify_all(
    trace: Trace,
    caps: QueueCapacities,
    profile: ValueProfile,
    state_cap: int = DEFAULT_STATE_CAP,
) -> ComparativeReport:
    """Populate every derived quantity and every verdict for one drained trace."""
    if not trace.drained:
        raise ValueError("verify_all needs a drained trace; use append_drain first")
    m = profile.m
    greedy_ledger, _ = run_greedy(trace, caps, profile)
    opt_result = opt_search(trace, caps, profile, state_cap=state_cap)
    opt_ledger = replay_schedule(trace, caps, profile, opt_result.schedule)

    xi = compute_xi(greedy_ledger, opt_ledger)
    phi = compute_phi(greedy_ledger, opt_ledger)
    A = greedy_ledger.final.accepted
    Astar = opt_ledger.final.accepted
    D = tuple(a_star - a for a_star, a in zip(Astar, A))
    S = suffix_sums(A)
    U = u_recursion(A)
    U_explicit = u_explicit(A)
    report = compute_c(profile)
    delta = compute_delta(profile, report.c_star, U, S) if m >= 3 else ()

    g = greedy_ledger.benefit_transmitted
    o = opt_ledger.benefit_transmitted
    ratio = o / g if g else Fraction(1)

    backlogged, opt_empty = check_surplus_monotonicity(
        trace, greedy_ledger, opt_ledger, xi
    )
    verdicts = [
        _check_conservation(greedy_ledger, "conservation_greedy"),
        _check_conservation(opt_ledger, "conservation_opt"),
        check_xi_nonneg(xi),
        backlogged,
        opt_empty,
        check_phi_nonneg(phi),
        check_aggregate_deficit(greedy_ledger, opt_ledger),
        Verdict("top_class_equal", A[m - 1] == Astar[m - 1]),
        check_D_bounds(D, S),
        check_D_sum_bounds(D, S),
        check_u_bounds(D, U),
        Verdict("u_forms_agree", U == U_explicit),
        check_coefficient_signs(profile, report.c_star),
        check_delta_chain(profile, A, D),
        Verdict("ratio_bound", (ratio <= report.upper) if g else (o == 0)),
    ]

    return ComparativeReport(
        m=m,
        xi=xi,
        phi=phi,
        D=D,
        S=S,
        U=U,
        delta=delta,
        greedy_benefit=g,
        opt_benefit=o,
        ratio=ratio,
        bound=report.upper,
        verdicts={v.name: v for v in verdicts},
    )


def format_report(report: ComparativeReport) -> str:
    """Human-readable block; the machine-readable form is verdict_lines()."""
    lines = [
        f"classes: {report.m}",
        f"greedy benefit: {report.greedy_benefit}",
        f"optimal benefit: {report.opt_benefit}",
        f"ratio: {report.ratio}  (bound {report.bound})",
        f"D: {','.join(map(str, report.D))}",
        f"S: {','.join(map(str, report.S))}",
        f"U: {','.join(map(str, report.U))}",
    ]
    if report.delta:
        lines.append(f"delta: {','.join(map(str, report.delta))}")
    lines.extend(report.verdict_lines())
    return "\n".join(lines) + "\n"

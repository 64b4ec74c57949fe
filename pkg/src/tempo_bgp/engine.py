"""The three evaluation engines over a shared working table.

All engines maintain rows ``(matching, state, clock stamps)`` and fold the
temporal domain in order, feeding each matching its activity letter at
every timepoint.  They differ in when matchings enter the table:

* ``run_baseline`` matches the whole graph up front, then runs the
  automaton over the full domain for all matchings synchronously.
* ``run_on_demand`` consumes snapshots as a stream; matchings appear when
  their last edge enters the history and catch up by replaying the letters
  seen so far.
* ``run_partial_match`` also tracks partial matchings, so new rows inherit
  live configurations from the row they extend and nothing is replayed.
  Extensions only ever bind edges first seen in the current snapshot;
  combinations with older edges arise transitively through surviving rows,
  and rows whose configuration set empties take all their unseen
  extensions with them.

Rows are dropped as soon as their configuration set empties or only
early-reject states remain; total matchings whose configurations touch an
early-accept state are emitted immediately.  Disabling ``early_exit``
changes counters, never results.  When the automaton idles on empty
letters (``dead_start``), baseline and on-demand defer a matching's rows
until one of its edges has been seen.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .bgp import (
    Bgp,
    Matching,
    delta_match,
    empty_matching,
    extend,
    match_total,
)
from .errors import FormatError, OrderIncompatible, OrderNotConnected
from .temporal_graph import TemporalGraph
from .timed_automaton import (
    Compatibility,
    Config,
    TimedAutomaton,
    is_compatible_order,
    is_connected_order,
    order_indices,
    step,
)

Stream = Iterator[tuple[float, frozenset[str]]]


@dataclass
class Counters:
    rows: int = 0
    generated: int = 0
    early_rejected: int = 0
    warnings: int = 0


@dataclass
class EngineResult:
    accepted: list[tuple[Matching, float]]
    counters: Counters

    @property
    def accepted_set(self) -> frozenset[Matching]:
        return frozenset(m for m, _ in self.accepted)


@dataclass
class RowTrace:
    t: float
    matching: Matching
    letter: int
    configs: tuple[Config, ...]
    status: str  # "alive" | "dropped" | "accepted"


@dataclass
class CatchUpEvent:
    matching: Matching
    discovered_at: float
    configs: tuple[Config, ...]
    eliminated_at: float | None


@dataclass
class Trace:
    """Optional per-tick recording, for tests and debugging only."""

    rows: list[RowTrace] = field(default_factory=list)
    events: list[CatchUpEvent] = field(default_factory=list)

    def add_row(self, t, matching, letter, configs, status) -> None:
        self.rows.append(RowTrace(t, matching, letter, tuple(sorted(configs)), status))

    def add_event(self, matching, discovered_at, configs, eliminated_at) -> None:
        self.events.append(
            CatchUpEvent(matching, discovered_at, tuple(sorted(configs)), eliminated_at)
        )

    def rows_at(self, t: float) -> list[RowTrace]:
        return [r for r in self.rows if r.t == t]

    def row(self, t: float, matching: Matching) -> RowTrace:
        hits = [r for r in self.rows if r.t == t and r.matching == matching]
        if len(hits) != 1:
            raise KeyError(f"expected one row for {matching} at t={t}, found {len(hits)}")
        return hits[0]


def _check_width(p: Bgp, ta: TimedAutomaton) -> None:
    if ta.width != len(p.edge_vars):
        raise FormatError(
            f"automaton width {ta.width} does not match the pattern's {len(p.edge_vars)} edge variables"
        )


def _check_streamable(p: Bgp) -> None:
    # snapshot streams only ever reveal edges, so a pattern without edge
    # variables would silently return nothing here while the baseline
    # matches it statically
    if not p.edge_vars:
        raise FormatError(
            "streaming engines need at least one edge variable; use the baseline for static patterns"
        )


def _letter_bits(edges: Sequence[str | None], snap: frozenset[str]) -> int:
    bits = 0
    for j, eid in enumerate(edges):
        if eid is not None and eid in snap:
            bits |= 1 << j
    return bits


def _graph_stream(g: TemporalGraph) -> Stream:
    return ((t, g.snapshots[t]) for t in g.domain)


def _sorted_result(accepted: dict[Matching, float], counters: Counters) -> EngineResult:
    items = sorted(
        accepted.items(),
        key=lambda kv: (
            tuple(e or "" for e in kv[0].edges),
            tuple(v or "" for v in kv[0].nodes),
        ),
    )
    return EngineResult(items, counters)


def run_baseline(
    g: TemporalGraph,
    p: Bgp,
    ta: TimedAutomaton,
    *,
    early_exit: bool = True,
    defer_start: bool = True,
    distinct_edges: bool = False,
    trace: Trace | None = None,
) -> EngineResult:
    """Match first, then run the automaton once over the whole domain."""
    _check_width(p, ta)
    counters = Counters()
    matchings = match_total(g, p, distinct_edges=distinct_edges)
    counters.generated = len(matchings)
    init = ta.initial_config()
    accepted: dict[Matching, float] = {}
    alive: dict[Matching, set[Config]] = {}
    waking: dict[int, list[Matching]] = {}
    idle: list[Matching] = []  # no activation anywhere; judged on the initial configs
    use_defer = defer_start and ta.dead_start

    for m in matchings:
        if trace is not None:
            trace.add_row(0.0, m, 0, (init,), "alive")
        if early_exit and init[0] in ta.early_accept:
            accepted[m] = 0.0
            continue
        if early_exit and init[0] in ta.early_reject:
            counters.early_rejected += 1
            continue
        if use_defer:
            ranks = [g.first_rank[e] for e in m.edges if e is not None and e in g.first_rank]
            if ranks:
                waking.setdefault(min(ranks), []).append(m)
            else:
                idle.append(m)
        else:
            alive[m] = {init}

    for i, t in enumerate(g.domain, start=1):
        snap = g.snapshots[t]
        for m in waking.pop(i, ()):
            alive[m] = {init}
        alive = _tick(ta, alive, snap, t, counters, accepted, early_exit, trace, total_test=None)

    end_time = g.domain[-1] if g.domain else 0.0
    for m, configs in alive.items():
        if any(s in ta.accepting for s, _ in configs):
            accepted[m] = end_time
    if idle and ta.initial in ta.accepting:
        for m in idle:
            accepted[m] = end_time
    return _sorted_result(accepted, counters)


def _tick(ta, table, snap, t, counters, accepted, early_exit, trace, total_test):
    """Advance every row one letter; returns the surviving table."""
    nxt_table: dict[Matching, set[Config]] = {}
    for m, configs in table.items():
        bits = _letter_bits(m.edges, snap)
        counters.rows += len(configs)
        nxt = step(ta, configs, bits, t)
        status = "alive"
        if early_exit and nxt:
            eligible = total_test is None or total_test(m)
            if eligible and any(s in ta.early_accept for s, _ in nxt):
                accepted[m] = t
                status = "accepted"
            else:
                nxt = {c for c in nxt if c[0] not in ta.early_reject}
        if status == "alive":
            if nxt:
                nxt_table[m] = nxt
            else:
                status = "dropped"
                counters.early_rejected += 1
        if trace is not None:
            trace.add_row(t, m, bits, nxt, status)
    return nxt_table


def run_on_demand(
    g: TemporalGraph,
    p: Bgp,
    ta: TimedAutomaton,
    *,
    early_exit: bool = True,
    defer_start: bool = True,
    distinct_edges: bool = False,
    trace: Trace | None = None,
    stream: Stream | None = None,
) -> EngineResult:
    """Consume snapshots in order; catch newly found matchings up from scratch.

    Only the prefix of the domain seen so far is ever touched, so the
    snapshot source may be a live stream.
    """
    _check_width(p, ta)
    _check_streamable(p)
    counters = Counters()
    init = ta.initial_config()
    accepted: dict[Matching, float] = {}
    alive: dict[Matching, set[Config]] = {}
    history: set[str] = set()
    past: list[tuple[float, frozenset[str]]] = []
    use_defer = defer_start and ta.dead_start
    end_time = 0.0

    for t, snap in stream if stream is not None else _graph_stream(g):
        new_edges = {e for e in snap if e not in history}
        new_matchings = (
            delta_match(g, p, history, new_edges, distinct_edges=distinct_edges)
            if new_edges
            else []
        )
        counters.generated += len(new_matchings)

        for m in new_matchings:
            configs: set[Config] = {init}
            bound = [e for e in m.edges if e is not None]
            start = 0
            if use_defer:
                start = next(
                    (j for j, (_, sj) in enumerate(past) if any(e in sj for e in bound)),
                    len(past),
                )
            eliminated_at = None
            done = False
            for tj, sj in past[start:]:
                bits = _letter_bits(m.edges, sj)
                counters.rows += len(configs)
                configs = step(ta, configs, bits, tj)
                if early_exit and configs:
                    if any(s in ta.early_accept for s, _ in configs):
                        accepted[m] = t
                        done = True
                        break
                    configs = {c for c in configs if c[0] not in ta.early_reject}
                if not configs:
                    eliminated_at = tj
                    counters.early_rejected += 1
                    done = True
                    break
            if trace is not None:
                trace.add_event(m, t, configs, eliminated_at)
            if not done:
                alive[m] = configs

        alive = _tick(ta, alive, snap, t, counters, accepted, early_exit, trace, total_test=None)
        history |= new_edges
        past.append((t, snap))
        end_time = t

    for m, configs in alive.items():
        if any(s in ta.accepting for s, _ in configs):
            accepted[m] = end_time
    return _sorted_result(accepted, counters)


def run_partial_match(
    g: TemporalGraph,
    p: Bgp,
    ta: TimedAutomaton,
    *,
    order: Sequence[str] | None = None,
    early_exit: bool = True,
    distinct_edges: bool = False,
    trace: Trace | None = None,
    stream: Stream | None = None,
) -> EngineResult:
    """Incrementally maintain partial matchings; no catching up, ever.

    With ``order`` the working set is restricted to matchings binding a
    prefix of that order; the order must be connected for the pattern and
    must not be provably incompatible with the automaton (an unverifiable
    order proceeds and bumps the warning counter).
    """
    _check_width(p, ta)
    _check_streamable(p)
    counters = Counters()
    order_names = tuple(order) if order is not None else None
    if order_names is not None:
        if not is_connected_order(p, order_names):
            raise OrderNotConnected(f"order {','.join(order_names)} has a disconnected prefix")
        comp = is_compatible_order(ta, order_indices(p, order_names))
        if comp is Compatibility.INCOMPATIBLE:
            raise OrderIncompatible(
                f"order {','.join(order_names)} contradicts the automaton's language"
            )
        if comp is Compatibility.UNKNOWN:
            counters.warnings += 1

    init = ta.initial_config()
    table: dict[Matching, set[Config]] = {empty_matching(p): {init}}
    accepted: dict[Matching, float] = {}
    history: set[str] = set()
    end_time = 0.0
    is_total_cache: dict[Matching, bool] = {}

    def total_test(m: Matching) -> bool:
        hit = is_total_cache.get(m)
        if hit is None:
            hit = is_total_cache.setdefault(m, m.is_total(p))
        return hit

    if trace is not None:
        for m, configs in table.items():
            trace.add_row(0.0, m, 0, configs, "alive")

    for t, snap in stream if stream is not None else _graph_stream(g):
        new_edges = frozenset(snap - history)
        history |= new_edges
        if new_edges and table:
            pairs = extend(
                g,
                p,
                list(table.keys()),
                new_edges,
                history,
                order=order_names,
                distinct_edges=distinct_edges,
            )
            rewritten: dict[Matching, set[Config]] = {}
            for old, new in pairs:
                if new != old:
                    counters.generated += 1
                rewritten.setdefault(new, set()).update(table[old])
            table = rewritten
        table = _tick(ta, table, snap, t, counters, accepted, early_exit, trace, total_test)
        end_time = t

    for m, configs in table.items():
        if total_test(m) and any(s in ta.accepting for s, _ in configs):
            accepted[m] = end_time
    return _sorted_result(accepted, counters)


ALGORITHMS = ("baseline", "on-demand", "partial")


def run(
    algo: str,
    g: TemporalGraph,
    p: Bgp,
    ta: TimedAutomaton,
    *,
    order: Sequence[str] | None = None,
    early_exit: bool = True,
    defer_start: bool = True,
    distinct_edges: bool = False,
    trace: Trace | None = None,
) -> EngineResult:
    """Dispatch to one of the three engines by name."""
    if algo not in ALGORITHMS:
        raise FormatError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    if order is not None and algo != "partial":
        raise FormatError("an edge-variable order only applies to the partial algorithm")
    common = dict(early_exit=early_exit, distinct_edges=distinct_edges, trace=trace)
    if algo == "baseline":
        return run_baseline(g, p, ta, defer_start=defer_start, **common)
    if algo == "on-demand":
        return run_on_demand(g, p, ta, defer_start=defer_start, **common)
    return run_partial_match(g, p, ta, order=order, **common)

"""Timed automata over edge-activity letters.

An automaton reads one letter per timepoint of the temporal domain.  A
letter is a bitset of width equal to the pattern's edge-variable count:
bit ``j`` is set when the edge bound to the j-th edge variable is active
at the current timepoint.  Transitions carry a letter pattern over
``{0,1,*}``, a conjunction of clock comparisons, and a set of clocks to
reset.  Clocks are stored lazily as the time of their last reset; the
value of clock ``c`` at time ``t`` is ``t - last_reset[c]``.

Letter predicates that are not a single cube (XOR and friends) are spelled
as several transition rows, one per pattern, exactly as in the relational
encoding of the automaton.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .bgp import Bgp
from .errors import FormatError

Config = tuple[int, tuple[float, ...]]
GuardAtom = tuple[int, str, float]

_OPS = {
    "<": lambda v, b: v < b,
    "<=": lambda v, b: v <= b,
    ">": lambda v, b: v > b,
    ">=": lambda v, b: v >= b,
}


@dataclass(frozen=True)
class Transition:
    src: int
    pattern: str
    guard: tuple[GuardAtom, ...]
    resets: tuple[int, ...]
    dst: int


def _pattern_mask_value(pattern: str) -> tuple[int, int]:
    """Compile a {0,1,*} pattern into (cared-bit mask, required value).

    The leftmost character is the first edge variable, i.e. bit 0.
    """
    mask = value = 0
    for j, ch in enumerate(pattern):
        if ch == "*":
            continue
        mask |= 1 << j
        if ch == "1":
            value |= 1 << j
    return mask, value


def eval_letter(theta: str | Sequence[str], letter: int) -> bool:
    """True when the concrete letter matches one of the predicate's patterns."""
    patterns = (theta,) if isinstance(theta, str) else theta
    for pattern in patterns:
        mask, value = _pattern_mask_value(pattern)
        if letter & mask == value:
            return True
    return False


def eval_clock_guard(guard: Iterable[GuardAtom], last_reset: Sequence[float], now: float) -> bool:
    """Conjunction of ``(now - last_reset[c]) op bound`` over the atoms."""
    for clock, op, bound in guard:
        if not _OPS[op](now - last_reset[clock], bound):
            return False
    return True


class TimedAutomaton:
    """Parsed automaton plus derived lookup and pruning structures.

    ``early_accept`` holds states from which acceptance can no longer be
    missed: every reachable state (guards ignored) is accepting and covers
    every letter with a guard-free transition, so no run from there can die
    or end badly.  ``early_reject`` holds states from which no accepting
    state is even optimistically reachable.  Both are therefore sound
    under-approximations.  ``dead_start`` is set when the only transitions
    the initial state enables on the all-zero letter are guard-free,
    reset-free self-loops, making idle prefixes skippable.
    """

    def __init__(
        self,
        n_states: int,
        initial: int,
        accepting: Iterable[int],
        n_clocks: int,
        width: int,
        transitions: Iterable[Transition],
    ):
        self.n_states = n_states
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.n_clocks = n_clocks
        self.width = width
        self.transitions = tuple(transitions)
        self._validate()

        self._exact: dict[tuple[int, int], list[Transition]] = {}
        self._wild: dict[int, list[tuple[int, int, Transition]]] = {}
        for tr in self.transitions:
            if "*" in tr.pattern:
                mask, value = _pattern_mask_value(tr.pattern)
                self._wild.setdefault(tr.src, []).append((mask, value, tr))
            else:
                bits = _pattern_mask_value(tr.pattern)[1]
                self._exact.setdefault((tr.src, bits), []).append(tr)

        self.early_accept, self.early_reject = classify_states(self)
        self.dead_start = self._detect_dead_start()

    def _validate(self) -> None:
        if not 0 <= self.initial < self.n_states:
            raise FormatError(f"initial state {self.initial} out of range")
        for s in self.accepting:
            if not 0 <= s < self.n_states:
                raise FormatError(f"accepting state {s} out of range")
        for tr in self.transitions:
            if not (0 <= tr.src < self.n_states and 0 <= tr.dst < self.n_states):
                raise FormatError(f"transition {tr} references an unknown state")
            if len(tr.pattern) != self.width or any(c not in "01*" for c in tr.pattern):
                raise FormatError(
                    f"pattern {tr.pattern!r} is not a width-{self.width} string over 0/1/*"
                )
            for clock, op, _bound in tr.guard:
                if not 0 <= clock < self.n_clocks:
                    raise FormatError(f"guard references unknown clock {clock}")
                if op not in _OPS:
                    raise FormatError(f"unknown comparator {op!r}")
            for clock in tr.resets:
                if not 0 <= clock < self.n_clocks:
                    raise FormatError(f"reset references unknown clock {clock}")

    def transitions_from(self, state: int, letter: int) -> list[Transition]:
        out = list(self._exact.get((state, letter), ()))
        for mask, value, tr in self._wild.get(state, ()):
            if letter & mask == value:
                out.append(tr)
        return out

    def initial_config(self) -> Config:
        return (self.initial, (0.0,) * self.n_clocks)

    def _detect_dead_start(self) -> bool:
        zero_enabled = self.transitions_from(self.initial, 0)
        return bool(zero_enabled) and all(
            tr.dst == self.initial and not tr.guard and not tr.resets for tr in zero_enabled
        )


_NO_TRANSITIONS: tuple = ()


def step(ta: TimedAutomaton, configs: Iterable[Config], letter: int, now: float) -> set[Config]:
    """One synchronous move of every configuration on ``letter`` at ``now``.

    The guard is evaluated against pre-reset clock values; clocks in the
    reset set are then stamped with ``now``.  An empty result means every
    run died.
    """
    out: set[Config] = set()
    exact = ta._exact
    wild = ta._wild
    n_clocks = ta.n_clocks
    for state, last_reset in configs:
        candidates = exact.get((state, letter), _NO_TRANSITIONS)
        wilds = wild.get(state)
        if wilds:
            matched = [tr for mask, value, tr in wilds if letter & mask == value]
            if matched:
                candidates = list(candidates) + matched
        for tr in candidates:
            if tr.guard and not eval_clock_guard(tr.guard, last_reset, now):
                continue
            if tr.resets:
                nxt = tuple(
                    now if c in tr.resets else last_reset[c] for c in range(n_clocks)
                )
            else:
                nxt = last_reset
            out.add((tr.dst, nxt))
    return out


def accepts(ta: TimedAutomaton, word: Sequence[tuple[float, int]]) -> bool:
    """Whether some run over the timed word ends in an accepting state.

    The empty word is accepted exactly when the initial state accepts.
    """
    configs: set[Config] = {ta.initial_config()}
    prev = 0.0
    for t, letter in word:
        if t <= prev:
            raise FormatError(f"timepoints must be strictly increasing, got {t} after {prev}")
        configs = step(ta, configs, letter, t)
        if not configs:
            return False
        prev = t
    return any(state in ta.accepting for state, _ in configs)


def classify_states(ta: TimedAutomaton) -> tuple[frozenset[int], frozenset[int]]:
    """Early-accept and early-reject state sets.

    Reachability ignores guards entirely.  Early acceptance additionally
    requires every reachable state to cover all ``2^width`` letters with
    guard-free transitions; otherwise a run could still die on a future
    letter and the matching would wrongly be emitted.
    """
    succ: dict[int, set[int]] = {s: set() for s in range(ta.n_states)}
    for tr in ta.transitions:
        succ[tr.src].add(tr.dst)

    reach: dict[int, set[int]] = {}
    for s in range(ta.n_states):
        seen = {s}
        stack = [s]
        while stack:
            q = stack.pop()
            for r in succ[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        reach[s] = seen

    def letter_total(state: int) -> bool:
        free = [
            _pattern_mask_value(tr.pattern)
            for tr in ta.transitions
            if tr.src == state and not tr.guard
        ]
        return all(
            any(letter & mask == value for mask, value in free)
            for letter in range(1 << ta.width)
        )

    total_cache = {s: letter_total(s) for s in range(ta.n_states)}
    early_accept = frozenset(
        s
        for s in range(ta.n_states)
        if all(q in ta.accepting and total_cache[q] for q in reach[s])
    )
    early_reject = frozenset(
        s for s in range(ta.n_states) if not (reach[s] & ta.accepting)
    )
    return early_accept, early_reject


# ---------------------------------------------------------------------------
# Parsing


def parse_automaton(text: str, n_edge_vars: int, n_clocks: int | None = None) -> TimedAutomaton:
    """Parse the line-oriented automaton format.

    Directives::

        states <n>
        initial <id>
        accepting <id> [<id> ...]
        clocks <k>
        trans <from> <pattern> <guard> <resets> <to>

    ``pattern`` is a string over ``{0,1,*}`` of width ``n_edge_vars`` (``-``
    for width 0); ``guard`` is ``true`` or ``&``-joined atoms like
    ``c0<3``; ``resets`` is ``-`` or comma-joined clock indices.  When
    ``n_clocks`` is given it must agree with the file's declaration.
    """
    n_states = initial = None
    accepting: list[int] = []
    declared_clocks = 0
    rows: list[tuple[int, str, str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "states":
                n_states = int(parts[1])
            elif parts[0] == "initial":
                initial = int(parts[1])
            elif parts[0] == "accepting":
                accepting = [int(x) for x in parts[1:]]
            elif parts[0] == "clocks":
                declared_clocks = int(parts[1])
            elif parts[0] == "trans":
                _, src, pattern, guard, resets, dst = parts
                rows.append((int(src), pattern, guard, resets, int(dst)))
            else:
                raise FormatError(f"line {lineno}: unknown directive {parts[0]!r}")
        except (IndexError, ValueError):
            raise FormatError(f"line {lineno}: malformed directive {line!r}") from None

    if n_states is None or initial is None:
        raise FormatError("automaton must declare 'states' and 'initial'")
    if not accepting:
        raise FormatError("automaton must declare at least one accepting state")
    if n_clocks is not None and n_clocks != declared_clocks:
        raise FormatError(
            f"clock count mismatch: file declares {declared_clocks}, caller expects {n_clocks}"
        )

    transitions = []
    for src, pattern, guard_text, resets_text, dst in rows:
        if pattern == "-" and n_edge_vars == 0:
            pattern = ""
        if len(pattern) != n_edge_vars:
            raise FormatError(
                f"pattern {pattern!r} has width {len(pattern)}, expected {n_edge_vars}"
            )
        transitions.append(
            Transition(src, pattern, _parse_guard(guard_text), _parse_resets(resets_text), dst)
        )

    return TimedAutomaton(n_states, initial, accepting, declared_clocks, n_edge_vars, transitions)


def _parse_guard(text: str) -> tuple[GuardAtom, ...]:
    if text == "true":
        return ()
    atoms = []
    for part in text.split("&"):
        m = re.match(r"^c(\d+)(<=|>=|<|>)(-?\d+(?:\.\d+)?)$", part.strip())
        if not m:
            raise FormatError(f"bad clock guard atom {part!r}")
        atoms.append((int(m.group(1)), m.group(2), float(m.group(3))))
    return tuple(atoms)


def _parse_resets(text: str) -> tuple[int, ...]:
    if text == "-":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise FormatError(f"bad reset list {text!r}") from None


# ---------------------------------------------------------------------------
# Edge-variable orders


class Compatibility(Enum):
    COMPATIBLE = "Compatible"
    INCOMPATIBLE = "Incompatible"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def is_connected_order(p: Bgp, order: Sequence[str]) -> bool:
    """Whether every prefix of ``order`` induces a connected subpattern.

    Connectivity is over shared endpoints, undirected, with constants
    counting as vertices.
    """
    if sorted(order) != sorted(p.edge_vars):
        raise FormatError(f"order {order!r} is not a permutation of the edge variables")
    comp: dict[str, str] = {}

    def find(x: str) -> str:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    n_components = 0
    for y in order:
        a, b = p.rho[y]
        for v in (a, b):
            if v not in comp:
                comp[v] = v
                n_components += 1
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[ra] = rb
            n_components -= 1
        if n_components > 1:
            return False
    return True


def _first_appearance_nfa(bit_early: int, bit_late: int) -> list[tuple[int, int, int, int]]:
    """Three-state recognizer of words where ``late`` strictly precedes ``early``.

    Transitions are (state, mask, value, next): state 0 loops while neither
    bit is set, moves on when the late bit fires alone, state 1 waits for
    the early bit, state 2 absorbs.  Accepting state is 2.
    """
    me, ml = 1 << bit_early, 1 << bit_late
    return [
        (0, me | ml, 0, 0),
        (0, me | ml, ml, 1),
        (1, 0, 0, 1),
        (1, me, me, 2),
        (2, 0, 0, 2),
    ]


def is_compatible_order(ta: TimedAutomaton, order: Sequence[int]) -> Compatibility:
    """Check an edge-variable order against the automaton's language.

    ``order`` lists canonical bit indices, earliest first.  For each pair,
    the clock-relaxed automaton (guards dropped) is intersected with the
    recognizer of the forbidden first-appearance pattern; a reachable
    accepting product state is a counterexample.  The relaxation
    over-approximates the timed language, so with clocks present a
    counterexample only yields ``UNKNOWN``.
    """
    if sorted(order) != list(range(ta.width)):
        raise FormatError(f"order {order!r} is not a permutation of 0..{ta.width - 1}")
    letters = range(1 << ta.width)
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            nfa = _first_appearance_nfa(order[i], order[j])
            start = (ta.initial, 0)
            seen = {start}
            stack = [start]
            nonempty = False
            while stack and not nonempty:
                s_ta, s_nfa = stack.pop()
                for letter in letters:
                    ta_next = {tr.dst for tr in ta.transitions_from(s_ta, letter)}
                    if not ta_next:
                        continue
                    nfa_next = {
                        nxt
                        for (src, mask, value, nxt) in nfa
                        if src == s_nfa and letter & mask == value
                    }
                    for q in ta_next:
                        for r in nfa_next:
                            if q in ta.accepting and r == 2:
                                nonempty = True
                            if (q, r) not in seen:
                                seen.add((q, r))
                                stack.append((q, r))
            if nonempty:
                return Compatibility.UNKNOWN if ta.n_clocks else Compatibility.INCOMPATIBLE
    return Compatibility.COMPATIBLE


def order_indices(p: Bgp, order: Sequence[str]) -> list[int]:
    """Translate an order given as variable names into canonical bit indices."""
    return [p.edge_index(y) for y in order]

"""Pushdown automata: documents, step-bounded simulation, run tracing, enumeration.

Stack convention: push strings are written top-first, so a transition with
push "AB" leaves A on top of B. Input and stack symbols are single characters
so the documented string fields stay unambiguous.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass

from .errors import AlphabetError
from .grammar import Enumeration

ACCEPTED = "accepted"
REJECTED = "rejected"
CUTOFF = "cutoff"

#: stack prefix length used as the visited-set key; longer stacks are pruned
#: only on their top segment, trading completeness (already bounded by the
#: step cap) for a bounded visited set
PRUNE_DEPTH = 32


@dataclass(frozen=True)
class PdaTransition:
    source: str
    read: str | None  # None = ε
    pop: str
    target: str
    push: tuple[str, ...]  # push[0] ends up on top


@dataclass(frozen=True)
class Pda:
    states: frozenset[str]
    input_alphabet: frozenset[str]
    stack_alphabet: frozenset[str]
    initial: str
    initial_stack: str
    acceptance: str  # "final" | "empty"
    accepting: frozenset[str]
    transitions: tuple[PdaTransition, ...]

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError("initial state not declared")
        if self.initial_stack not in self.stack_alphabet:
            raise ValueError("initial stack symbol not declared")
        if self.acceptance not in ("final", "empty"):
            raise ValueError(f"unknown acceptance mode {self.acceptance!r}")
        if not self.accepting <= self.states:
            raise ValueError("accepting states not declared")
        for sym in self.input_alphabet | self.stack_alphabet:
            if len(sym) != 1:
                raise ValueError(f"symbols must be single characters, got {sym!r}")
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise ValueError(f"transition references unknown state: {t}")
            if t.read is not None and t.read not in self.input_alphabet:
                raise ValueError(f"transition reads unknown symbol: {t}")
            if t.pop not in self.stack_alphabet:
                raise ValueError(f"transition pops unknown symbol: {t}")
            for s in t.push:
                if s not in self.stack_alphabet:
                    raise ValueError(f"transition pushes unknown symbol: {t}")


@dataclass(frozen=True)
class PdaConfig:
    state: str
    remaining: str
    stack: tuple[str, ...]  # bottom-to-top, as displayed to students


@dataclass(frozen=True)
class PdaRun:
    word: str
    steps: tuple[PdaConfig, ...]
    verdict: str  # accepted | rejected | cutoff


def _check_word(p: Pda, w: str):
    for c in w:
        if c not in p.input_alphabet:
            raise AlphabetError(f"symbol {c!r} not in input alphabet {sorted(p.input_alphabet)}")


def _is_accepting(p: Pda, pos: int, word_len: int, state: str, stack: tuple[str, ...]) -> bool:
    if pos != word_len:
        return False
    if p.acceptance == "final":
        return state in p.accepting
    return not stack


def _explore(p: Pda, w: str, step_cap: int):
    """Breadth-first configuration search with bounded-prefix pruning.

    Yields (verdict, accept_node, deepest_node, parents) where nodes are
    internal (state, pos, stack-top-first) configurations.
    """
    _check_word(p, w)
    if step_cap < 1:
        raise ValueError("step_cap must be at least 1")
    start = (p.initial, 0, (p.initial_stack,))
    parents: dict[tuple, tuple | None] = {}

    def key(node):
        state, pos, stack = node
        return (state, pos, stack[:PRUNE_DEPTH])

    visited = {key(start)}
    parents[start] = None
    queue: deque[tuple[tuple, int]] = deque([(start, 0)])
    deepest, deepest_depth = start, 0
    expansions = 0
    while queue:
        if expansions >= step_cap:
            return CUTOFF, None, deepest, parents
        node, depth = queue.popleft()
        state, pos, stack = node
        if _is_accepting(p, pos, len(w), state, stack):
            return ACCEPTED, node, deepest, parents
        expansions += 1
        if depth > deepest_depth:
            deepest, deepest_depth = node, depth
        for t in p.transitions:
            if t.source != state or not stack or stack[0] != t.pop:
                continue
            if t.read is None:
                npos = pos
            elif pos < len(w) and w[pos] == t.read:
                npos = pos + 1
            else:
                continue
            child = (t.target, npos, t.push + stack[1:])
            k = key(child)
            if k not in visited:
                visited.add(k)
                parents[child] = node
                queue.append((child, depth + 1))
    return REJECTED, None, deepest, parents


def pda_accepts(p: Pda, w: str, step_cap: int = 10_000) -> str:
    """ACCEPTED, REJECTED, or CUTOFF when the cap exhausts a live frontier."""
    verdict, _, _, _ = _explore(p, w, step_cap)
    return verdict


def pda_trace(p: Pda, w: str, step_cap: int = 10_000) -> PdaRun:
    """One run for the student-facing simulator.

    Accepting words get a shortest accepting run (ties broken by transition
    declaration order, which is the BFS expansion order); otherwise the
    longest explored run is returned with the overall verdict.
    """
    verdict, accept_node, deepest, parents = _explore(p, w, step_cap)
    tail = accept_node if verdict == ACCEPTED else deepest
    chain = []
    node = tail
    while node is not None:
        state, pos, stack = node
        chain.append(PdaConfig(state=state, remaining=w[pos:], stack=tuple(reversed(stack))))
        node = parents[node]
    return PdaRun(word=w, steps=tuple(reversed(chain)), verdict=verdict)


def step_cap_for(word: str) -> int:
    """Step cap used by enumeration and word grading: 200·(|w|+1)."""
    return 200 * (len(word) + 1)


def pda_enumerate(p: Pda, budget: float, max_len: int | None = None) -> Enumeration:
    """Accepted words length by length within a wall-clock budget.

    Membership is pda_accepts with the scaled step cap; CUTOFF counts as not
    accepted, which keeps results deterministic given lengths_completed.
    """
    if budget <= 0 and max_len is None:
        raise ValueError("budget must be positive")
    deadline = time.monotonic() + budget
    symbols = sorted(p.input_alphabet)
    words: set[str] = set()
    completed = -1
    length = 0
    while max_len is None or length <= max_len:
        found: list[str] = []
        if length > 0 and not symbols:
            completed = max_len if max_len is not None else length
            break
        ran_out = False
        for tup in itertools.product(symbols, repeat=length):
            if length > 0 and time.monotonic() > deadline:
                ran_out = True
                break
            w = "".join(tup)
            if pda_accepts(p, w, step_cap_for(w)) == ACCEPTED:
                found.append(w)
        if ran_out:
            break
        words.update(found)
        completed = length
        length += 1
        if max_len is None and time.monotonic() > deadline:
            break
    return Enumeration(frozenset(words), completed)


# ---------------------------------------------------------------------------
# documents


def pda_from_doc(doc: dict) -> Pda:
    """Parse the documented structured-text PDA object."""
    try:
        transitions = tuple(
            PdaTransition(
                source=t["from"],
                read=None if t["read"] == "eps" else t["read"],
                pop=t["pop"],
                target=t["to"],
                push=tuple(t["push"]),
            )
            for t in doc["transitions"]
        )
        return Pda(
            states=frozenset(doc["states"]),
            input_alphabet=frozenset(doc["input_alphabet"]),
            stack_alphabet=frozenset(doc["stack_alphabet"]),
            initial=doc["initial"],
            initial_stack=doc["initial_stack"],
            acceptance=doc["acceptance"],
            accepting=frozenset(doc.get("accepting", [])),
            transitions=transitions,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed PDA document: {exc}") from exc


def pda_to_doc(p: Pda) -> dict:
    return {
        "states": sorted(p.states),
        "input_alphabet": sorted(p.input_alphabet),
        "stack_alphabet": sorted(p.stack_alphabet),
        "initial": p.initial,
        "initial_stack": p.initial_stack,
        "acceptance": p.acceptance,
        "accepting": sorted(p.accepting),
        "transitions": [
            {"from": t.source, "read": "eps" if t.read is None else t.read,
             "pop": t.pop, "to": t.target, "push": "".join(t.push)}
            for t in p.transitions
        ],
    }


def run_to_doc(run: PdaRun) -> dict:
    return {
        "word": run.word,
        "verdict": run.verdict,
        "steps": [
            {"state": c.state, "remaining": c.remaining, "stack": "".join(c.stack)}
            for c in run.steps
        ],
    }

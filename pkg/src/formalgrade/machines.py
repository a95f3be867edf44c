"""While-language interpreter and multi-tape Turing machine simulator.

The two meet in compare_io: a While program and a TM are I/O-equivalent on an
input vector when both halt and leave the same values. Tapes carry naturals in
unary (value v = v cells of `1` starting at the head, blanks elsewhere); a
halted tape is decoded by counting `1`s from the head rightward to the first
blank.
"""

from __future__ import annotations

import itertools
import re as _re
import time
from dataclasses import dataclass, field

from .errors import ArityMismatch, ParseError, TmEncodingError

BLANK = "_"
HALTED = "halted"
CUTOFF = "cutoff"
NONTERMINATING = "nonterminating"  # reserved; the step-capped runners report cutoff
INVALID_ENCODING = "invalid-encoding"


# ---------------------------------------------------------------------------
# While programs


@dataclass(frozen=True)
class Assign:
    target: int
    source: int
    op: str  # '+' | '-' (monus)
    amount: int


@dataclass(frozen=True)
class Loop:
    var: int
    body: tuple


@dataclass(frozen=True)
class Branch:
    var: int
    then: tuple
    orelse: tuple


@dataclass(frozen=True)
class WhileProgram:
    var_count: int
    body: tuple

    def __post_init__(self):
        if self.var_count < 1:
            raise ValueError("programs need at least one variable")
        for idx in _used_vars(self.body):
            if idx >= self.var_count:
                raise ValueError(f"variable x{idx} out of range for {self.var_count} variables")


def _used_vars(stmts) -> set[int]:
    out: set[int] = set()
    for s in stmts:
        if isinstance(s, Assign):
            out |= {s.target, s.source}
        elif isinstance(s, Loop):
            out.add(s.var)
            out |= _used_vars(s.body)
        elif isinstance(s, Branch):
            out.add(s.var)
            out |= _used_vars(s.then) | _used_vars(s.orelse)
    return out


_TOKEN = _re.compile(r"\s*(x\d+|:=|!=|[+\-;]|\d+|while|do|end|if|then|else|\w+)")


class _WhileParser:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or not m.group(1):
                raise ParseError("unreadable token", column=pos + 1)
            self.tokens.append((m.group(1), m.start(1) + 1))
            pos = m.end()
        self.at = 0

    def peek(self) -> str | None:
        return self.tokens[self.at][0] if self.at < len(self.tokens) else None

    def take(self, expect: str | None = None) -> str:
        if self.at >= len(self.tokens):
            raise ParseError("unexpected end of program", column=0, expected=expect)
        tok, col = self.tokens[self.at]
        if expect is not None and tok != expect:
            raise ParseError(f"unexpected {tok!r}", column=col, expected=repr(expect))
        self.at += 1
        return tok

    def var(self) -> int:
        tok, col = self.tokens[self.at] if self.at < len(self.tokens) else ("", 0)
        if not _re.fullmatch(r"x\d+", tok):
            raise ParseError(f"expected variable, got {tok!r}", column=col or 1)
        self.at += 1
        return int(tok[1:])

    def program(self) -> tuple:
        stmts = [self.stmt()]
        while self.peek() == ";":
            self.take(";")
            stmts.append(self.stmt())
        return tuple(stmts)

    def stmt(self):
        tok = self.peek()
        if tok == "while":
            self.take("while")
            var = self.var()
            self.take("!=")
            self.take("0")
            self.take("do")
            body = self.program()
            self.take("end")
            return Loop(var, body)
        if tok == "if":
            self.take("if")
            var = self.var()
            self.take("!=")
            self.take("0")
            self.take("then")
            then = self.program()
            self.take("else")
            orelse = self.program()
            self.take("end")
            return Branch(var, then, orelse)
        target = self.var()
        self.take(":=")
        source = self.var()
        op = self.take()
        if op not in "+-":
            raise ParseError(f"expected '+' or '-', got {op!r}", column=1)
        amount_tok, col = self.tokens[self.at] if self.at < len(self.tokens) else ("", 0)
        if not amount_tok.isdigit():
            raise ParseError(f"expected a constant, got {amount_tok!r}", column=col or 1)
        self.at += 1
        return Assign(target, source, op, int(amount_tok))


def parse_while(text: str, var_count: int | None = None) -> WhileProgram:
    """Parse a While program; var_count defaults to max used index + 1."""
    if not text.strip():
        raise ParseError("empty program")
    parser = _WhileParser(text)
    body = parser.program()
    if parser.peek() is not None:
        tok, col = parser.tokens[parser.at]
        raise ParseError(f"trailing {tok!r}", column=col, expected="end of program")
    used = _used_vars(body)
    inferred = max(used, default=0) + 1
    if var_count is None:
        var_count = inferred
    elif var_count < inferred:
        raise ValueError(f"program uses x{inferred - 1} but var_count is {var_count}")
    return WhileProgram(var_count=var_count, body=body)


def print_while(p: WhileProgram) -> str:
    def one(s, pad) -> str:
        if isinstance(s, Assign):
            return f"{pad}x{s.target} := x{s.source} {s.op} {s.amount}"
        if isinstance(s, Loop):
            return (f"{pad}while x{s.var} != 0 do\n"
                    f"{stmts(s.body, pad + '  ')}\n{pad}end")
        return (f"{pad}if x{s.var} != 0 then\n{stmts(s.then, pad + '  ')}\n"
                f"{pad}else\n{stmts(s.orelse, pad + '  ')}\n{pad}end")

    def stmts(body, pad) -> str:
        return ";\n".join(one(s, pad) for s in body)

    return stmts(p.body, "")


@dataclass(frozen=True)
class IoBehaviour:
    input: tuple[int, ...]
    status: str  # halted | cutoff | nonterminating
    output: tuple[int, ...] | None


class _OutOfSteps(Exception):
    pass


def run_while(p: WhileProgram, inputs, step_cap: int = 100_000) -> IoBehaviour:
    """Big-step evaluation; one step per executed assignment or condition test."""
    inputs = tuple(inputs)
    if len(inputs) != p.var_count:
        raise ArityMismatch(f"expected {p.var_count} inputs, got {len(inputs)}")
    env = list(inputs)
    steps = 0

    def tick():
        nonlocal steps
        steps += 1
        if steps > step_cap:
            raise _OutOfSteps

    def run(body):
        for s in body:
            if isinstance(s, Assign):
                tick()
                value = env[s.source] + s.amount if s.op == "+" else env[s.source] - s.amount
                env[s.target] = max(0, value)
            elif isinstance(s, Loop):
                while True:
                    tick()
                    if env[s.var] == 0:
                        break
                    run(s.body)
            else:
                tick()
                run(s.then if env[s.var] != 0 else s.orelse)

    try:
        run(p.body)
    except _OutOfSteps:
        return IoBehaviour(inputs, CUTOFF, None)
    return IoBehaviour(inputs, HALTED, tuple(env))


# ---------------------------------------------------------------------------
# multi-tape Turing machines


@dataclass(frozen=True)
class TmTransition:
    state: str
    read: tuple[str, ...]
    next_state: str
    write: tuple[str, ...]
    move: tuple[str, ...]  # L | R | S per tape


@dataclass(frozen=True)
class MultiTapeTm:
    tape_count: int
    states: frozenset[str]
    alphabet: frozenset[str]
    initial: str
    halting: frozenset[str]
    transitions: tuple[TmTransition, ...]
    blank: str = BLANK

    def __post_init__(self):
        if self.blank not in self.alphabet:
            raise ValueError("blank symbol must be in the tape alphabet")
        if self.initial not in self.states or not self.halting <= self.states:
            raise ValueError("initial/halting states must be declared")
        seen = set()
        for t in self.transitions:
            if t.state not in self.states or t.next_state not in self.states:
                raise ValueError(f"undeclared state in {t}")
            if not (len(t.read) == len(t.write) == len(t.move) == self.tape_count):
                raise ValueError(f"vectors must have length {self.tape_count}: {t}")
            if any(s not in self.alphabet for s in t.read + t.write):
                raise ValueError(f"undeclared tape symbol in {t}")
            if any(m not in ("L", "R", "S") for m in t.move):
                raise ValueError(f"moves must be L/R/S: {t}")
            if (t.state, t.read) in seen:
                raise ValueError(f"nondeterministic transition for {(t.state, t.read)}")
            seen.add((t.state, t.read))

    def table(self) -> dict:
        return {(t.state, t.read): t for t in self.transitions}


def run_tm(m: MultiTapeTm, inputs, step_cap: int = 1000) -> IoBehaviour:
    """Run on unary-encoded inputs until a halting state, a stuck configuration,
    or the step cap. Raises TmEncodingError if a halted tape's decoded span is
    not all `1`s.
    """
    inputs = tuple(inputs)
    if len(inputs) != m.tape_count:
        raise ArityMismatch(f"expected {m.tape_count} inputs, got {len(inputs)}")
    tapes: list[dict[int, str]] = [{i: "1" for i in range(v)} for v in inputs]
    heads = [0] * m.tape_count
    state = m.initial
    table = m.table()
    steps = 0
    while state not in m.halting:
        read = tuple(tapes[k].get(heads[k], m.blank) for k in range(m.tape_count))
        t = table.get((state, read))
        if t is None:
            break  # stuck: no applicable transition, the machine halts
        if steps >= step_cap:
            return IoBehaviour(inputs, CUTOFF, None)
        steps += 1
        for k in range(m.tape_count):
            if t.write[k] == m.blank:
                tapes[k].pop(heads[k], None)
            else:
                tapes[k][heads[k]] = t.write[k]
            if t.move[k] == "L":
                heads[k] -= 1
            elif t.move[k] == "R":
                heads[k] += 1
        state = t.next_state
    out = []
    for k in range(m.tape_count):
        value = 0
        pos = heads[k]
        while tapes[k].get(pos, m.blank) != m.blank:
            if tapes[k][pos] != "1":
                raise TmEncodingError(
                    f"tape {k} holds {tapes[k][pos]!r} in the decoded span")
            value += 1
            pos += 1
        out.append(value)
    return IoBehaviour(inputs, HALTED, tuple(out))


# ---------------------------------------------------------------------------
# I/O comparison


@dataclass(frozen=True)
class Counterexample:
    input: tuple[int, ...]
    expected: tuple[int, ...] | str  # output vector, or cutoff/invalid-encoding
    computed: tuple[int, ...] | str


@dataclass(frozen=True)
class ComparisonReport:
    tested: int
    correct: int
    counterexamples: tuple[Counterexample, ...]


def input_vectors(arity: int, max_component: int):
    """All input vectors with components <= max_component, by (sum, lex)."""
    vectors = itertools.product(range(max_component + 1), repeat=arity)
    return sorted(vectors, key=lambda v: (sum(v), v))


def compare_io(p: WhileProgram, m: MultiTapeTm, budget: float, step_cap: int = 1000,
               max_component: int = 5, max_tests: int | None = None) -> ComparisonReport:
    """Test I/O equality on small inputs within a wall-clock budget.

    A test is correct iff both sides halt with equal output vectors. At most
    five counterexamples are kept, each carrying the expected and the computed
    outcome. Only completed tests are counted; `max_tests` pins the count for
    deterministic regrading.
    """
    if p.var_count != m.tape_count:
        raise ArityMismatch(f"{p.var_count} variables vs {m.tape_count} tapes")
    deadline = time.monotonic() + budget
    tested = correct = 0
    counterexamples: list[Counterexample] = []
    for vec in input_vectors(p.var_count, max_component):
        if max_tests is not None and tested >= max_tests:
            break
        if max_tests is None and time.monotonic() > deadline:
            break
        expected = run_while(p, vec, step_cap=step_cap)
        try:
            computed = run_tm(m, vec, step_cap=step_cap)
            computed_repr = computed.output if computed.status == HALTED else computed.status
        except TmEncodingError:
            computed = None
            computed_repr = INVALID_ENCODING
        tested += 1
        ok = (expected.status == HALTED and computed is not None
              and computed.status == HALTED and expected.output == computed.output)
        if ok:
            correct += 1
        elif len(counterexamples) < 5:
            expected_repr = expected.output if expected.status == HALTED else expected.status
            counterexamples.append(Counterexample(vec, expected_repr, computed_repr))
    return ComparisonReport(tested=tested, correct=correct,
                            counterexamples=tuple(counterexamples))


# ---------------------------------------------------------------------------
# documents


def tm_from_doc(doc: dict) -> MultiTapeTm:
    try:
        transitions = tuple(
            TmTransition(state=t["from"], read=tuple(t["read"]), next_state=t["to"],
                         write=tuple(t["write"]), move=tuple(t["move"]))
            for t in doc["transitions"]
        )
        return MultiTapeTm(
            tape_count=doc["tapes"],
            states=frozenset(doc["states"]),
            alphabet=frozenset(doc["alphabet"]),
            blank=doc.get("blank", BLANK),
            initial=doc["initial"],
            halting=frozenset(doc["halting"]),
            transitions=transitions,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed TM document: {exc}") from exc


def tm_to_doc(m: MultiTapeTm) -> dict:
    return {
        "tapes": m.tape_count,
        "states": sorted(m.states),
        "alphabet": sorted(m.alphabet),
        "blank": m.blank,
        "initial": m.initial,
        "halting": sorted(m.halting),
        "transitions": [
            {"from": t.state, "read": list(t.read), "to": t.next_state,
             "write": list(t.write), "move": list(t.move)}
            for t in m.transitions
        ],
    }

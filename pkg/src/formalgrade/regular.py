"""Regular-language substrate: regex ASTs, Thompson NFAs, equivalence, residuals.

The concrete regex syntax is ASCII: `|` for union, postfix `*`, parentheses,
and the keywords `eps` (empty word) and `empty` (empty language). `*` binds
tighter than juxtaposition, which binds tighter than `|`. Symbols are single
lowercase letters or digits; whitespace is ignored.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import AlphabetError, ParseError

#: Transition label standing for the empty word.
EPSILON = None


class Regex:
    """Base class for regex AST nodes. Nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Literal(Regex):
    symbol: str


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


def symbols_of(re: Regex) -> frozenset[str]:
    """All literal symbols occurring in the expression."""
    if isinstance(re, Literal):
        return frozenset(re.symbol)
    if isinstance(re, (Concat, Union)):
        return symbols_of(re.left) | symbols_of(re.right)
    if isinstance(re, Star):
        return symbols_of(re.inner)
    return frozenset()


def subexpressions(re: Regex) -> frozenset[Regex]:
    """The set of all subtrees of `re`, including `re` itself."""
    out = {re}
    if isinstance(re, (Concat, Union)):
        out |= subexpressions(re.left) | subexpressions(re.right)
    elif isinstance(re, Star):
        out |= subexpressions(re.inner)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Parsing and printing


class _ReParser:
    def __init__(self, text: str, alphabet: frozenset[str] | None):
        self.text = text
        self.pos = 0
        self.alphabet = alphabet

    def error(self, message: str, expected: str | None = None):
        raise ParseError(message, line=1, column=self.pos + 1, expected=expected)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> Regex:
        node = self.alt()
        if self.peek() is not None:
            self.error(f"unexpected {self.text[self.pos]!r}", expected="end of input")
        return node

    def alt(self) -> Regex:
        node = self.cat()
        while self.peek() == "|":
            self.pos += 1
            node = Union(node, self.cat())
        return node

    def cat(self) -> Regex:
        node = self.rep()
        while True:
            c = self.peek()
            if c is None or c in "|)":
                return node
            node = Concat(node, self.rep())

    def rep(self) -> Regex:
        node = self.atom()
        while self.peek() == "*":
            self.pos += 1
            node = Star(node)
        return node

    def atom(self) -> Regex:
        c = self.peek()
        if c is None:
            self.error("unexpected end of input", expected="symbol, 'eps', 'empty' or '('")
        if c == "(":
            self.pos += 1
            node = self.alt()
            if self.peek() != ")":
                self.error("unbalanced parenthesis", expected="')'")
            self.pos += 1
            return node
        # keywords win over juxtaposed single letters
        if self.text.startswith("eps", self.pos):
            self.pos += 3
            return Epsilon()
        if self.text.startswith("empty", self.pos):
            self.pos += 5
            return Empty()
        if c.islower() or c.isdigit():
            if self.alphabet is not None and c not in self.alphabet:
                raise AlphabetError(f"symbol {c!r} not in alphabet {sorted(self.alphabet)}")
            self.pos += 1
            return Literal(c)
        self.error(f"unexpected {c!r}", expected="symbol, 'eps', 'empty' or '('")


def parse_regex(text: str, alphabet=None) -> Regex:
    """Parse concrete regex syntax into an AST.

    `alphabet`, when given, restricts the symbols literals may use.
    """
    if not text.strip():
        raise ParseError("empty regular expression", expected="expression")
    alpha = frozenset(alphabet) if alphabet is not None else None
    return _ReParser(text, alpha).parse()


_PREC = {Union: 1, Concat: 2, Star: 3}


def _print_min(re: Regex) -> str:
    if isinstance(re, Empty):
        return "empty"
    if isinstance(re, Epsilon):
        return "eps"
    if isinstance(re, Literal):
        return re.symbol
    if isinstance(re, Star):
        inner = _print_min(re.inner)
        if isinstance(re.inner, (Concat, Union)):
            inner = f"({inner})"
        return inner + "*"
    op = "" if isinstance(re, Concat) else "|"
    prec = _PREC[type(re)]
    left = _print_min(re.left)
    if _PREC.get(type(re.left), 4) < prec:
        left = f"({left})"
    right = _print_min(re.right)
    # same-precedence right child needs parens to keep left association
    if _PREC.get(type(re.right), 4) <= prec and not isinstance(re.right, Star):
        right = f"({right})"
    return left + op + right


def _print_paren(re: Regex) -> str:
    if isinstance(re, Empty):
        return "empty"
    if isinstance(re, Epsilon):
        return "eps"
    if isinstance(re, Literal):
        return f"({re.symbol})"
    if isinstance(re, Star):
        return f"({_print_paren(re.inner)})*"
    op = "" if isinstance(re, Concat) else "|"
    return f"({_print_paren(re.left)}){op}({_print_paren(re.right)})"


def print_regex(re: Regex) -> str:
    """Canonical concrete form; parsing it back yields a structurally equal AST."""
    out = _print_min(re)
    # adjacent literals can accidentally spell a keyword; fall back if so
    if "eps" in out or "empty" in out:
        try:
            if parse_regex(out) == re:
                return out
        except (ParseError, AlphabetError):
            pass
        return _print_paren(re)
    return out


# ---------------------------------------------------------------------------
# NFAs


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton with optional ε-transitions.

    Transitions are triples (source, symbol, target) where symbol is either a
    member of `alphabet` or EPSILON (None).
    """

    states: frozenset
    alphabet: frozenset[str]
    transitions: frozenset[tuple]
    initial: object
    accepting: frozenset

    def __post_init__(self):
        if self.initial not in self.states:
            raise ValueError("initial state not in state set")
        if not self.accepting <= self.states:
            raise ValueError("accepting states not in state set")
        for src, sym, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition endpoint {src!r}->{dst!r} outside state set")
            if sym is not EPSILON and sym not in self.alphabet:
                raise ValueError(f"transition symbol {sym!r} not in alphabet")
        if EPSILON in self.alphabet or "" in self.alphabet:
            raise ValueError("the empty word is not an alphabet symbol")


class _Runner:
    """Adjacency view of an NFA with cached ε-closures and subset steps."""

    def __init__(self, nfa: Nfa):
        self.nfa = nfa
        self.eps: dict[object, list] = {s: [] for s in nfa.states}
        self.by_symbol: dict[tuple, list] = {}
        for src, sym, dst in nfa.transitions:
            if sym is EPSILON:
                self.eps[src].append(dst)
            else:
                self.by_symbol.setdefault((src, sym), []).append(dst)
        self._closure_cache: dict[object, frozenset] = {}
        self._step_cache: dict[tuple, frozenset] = {}

    def closure(self, state) -> frozenset:
        got = self._closure_cache.get(state)
        if got is not None:
            return got
        seen = {state}
        stack = [state]
        while stack:
            for nxt in self.eps[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        out = frozenset(seen)
        self._closure_cache[state] = out
        return out

    def closure_set(self, states) -> frozenset:
        out = set()
        for s in states:
            out |= self.closure(s)
        return frozenset(out)

    def start(self) -> frozenset:
        return self.closure(self.nfa.initial)

    def step(self, subset: frozenset, symbol: str) -> frozenset:
        key = (subset, symbol)
        got = self._step_cache.get(key)
        if got is not None:
            return got
        out = set()
        for s in subset:
            for dst in self.by_symbol.get((s, symbol), ()):
                out |= self.closure(dst)
        result = frozenset(out)
        self._step_cache[key] = result
        return result

    def is_accepting(self, subset: frozenset) -> bool:
        return not self.nfa.accepting.isdisjoint(subset)


def nfa_accepts(a: Nfa, w: str) -> bool:
    """Membership of `w` in L(a) by ε-closure subset stepping."""
    for c in w:
        if c not in a.alphabet:
            raise AlphabetError(f"symbol {c!r} not in alphabet {sorted(a.alphabet)}")
    runner = _Runner(a)
    subset = runner.start()
    for c in w:
        subset = runner.step(subset, c)
        if not subset:
            return False
    return runner.is_accepting(subset)


def accepted_words(a: Nfa, max_len: int) -> set[str]:
    """All words of length <= max_len accepted by `a`.

    Walks the word trie once, sharing subset computations between words with a
    common prefix; agrees with per-word nfa_accepts.
    """
    runner = _Runner(a)
    out: set[str] = set()
    symbols = sorted(a.alphabet)

    def walk(prefix: str, subset: frozenset):
        if runner.is_accepting(subset):
            out.add(prefix)
        if len(prefix) == max_len:
            return
        for c in symbols:
            nxt = runner.step(subset, c)
            if nxt:
                walk(prefix + c, nxt)

    walk("", runner.start())
    return out


# ---------------------------------------------------------------------------
# Thompson construction


def thompson(re: Regex, alphabet=None) -> Nfa:
    """Standard one-constructor-at-a-time ε-NFA with a single accepting state."""
    alpha = set(symbols_of(re))
    if alphabet is not None:
        alpha |= set(alphabet)
    counter = itertools.count()
    transitions: set[tuple] = set()

    def fresh() -> int:
        return next(counter)

    def build(node: Regex) -> tuple[int, int]:
        start, end = fresh(), fresh()
        if isinstance(node, Empty):
            pass
        elif isinstance(node, Epsilon):
            transitions.add((start, EPSILON, end))
        elif isinstance(node, Literal):
            transitions.add((start, node.symbol, end))
        elif isinstance(node, Concat):
            ls, le = build(node.left)
            rs, re_ = build(node.right)
            transitions.add((start, EPSILON, ls))
            transitions.add((le, EPSILON, rs))
            transitions.add((re_, EPSILON, end))
        elif isinstance(node, Union):
            ls, le = build(node.left)
            rs, re_ = build(node.right)
            transitions.update({(start, EPSILON, ls), (start, EPSILON, rs),
                                (le, EPSILON, end), (re_, EPSILON, end)})
        elif isinstance(node, Star):
            s, e = build(node.inner)
            transitions.update({(start, EPSILON, s), (start, EPSILON, end),
                                (e, EPSILON, s), (e, EPSILON, end)})
        else:
            raise TypeError(f"not a Regex node: {node!r}")
        return start, end

    initial, accept = build(re)
    states = frozenset(range(next(counter)))
    return Nfa(states=states, alphabet=frozenset(alpha),
               transitions=frozenset(transitions), initial=initial,
               accepting=frozenset({accept}))


# ---------------------------------------------------------------------------
# Equivalence


@dataclass(frozen=True)
class EquivResult:
    """Outcome of a language-equivalence check.

    When languages differ, `counterexample` is the shortest differentiating
    word, ties broken lexicographically; it may be the empty string.
    """

    equal: bool
    counterexample: str | None = None
    #: membership of the counterexample in the two languages, (left, right)
    membership: tuple[bool, bool] | None = None


def _to_nfa(x, alphabet=None) -> Nfa:
    if isinstance(x, Nfa):
        return x
    if isinstance(x, Regex):
        return thompson(x, alphabet=alphabet)
    raise TypeError(f"expected Regex or Nfa, got {type(x).__name__}")


def regular_equiv(x, y, alphabet=None) -> EquivResult:
    """Decide L(x) = L(y) exactly via the determinized product construction.

    Accepts Regex or Nfa on either side. On difference, returns the shortest,
    lexicographically least differentiating word.
    """
    a = _to_nfa(x, alphabet=alphabet)
    b = _to_nfa(y, alphabet=alphabet)
    alpha = sorted(a.alphabet | b.alphabet | (frozenset(alphabet) if alphabet else frozenset()))
    ra, rb = _Runner(a), _Runner(b)
    start = (ra.start(), rb.start())
    seen = {start}
    queue = deque([(start, "")])
    while queue:
        (sa, sb), word = queue.popleft()
        acc_a, acc_b = ra.is_accepting(sa), rb.is_accepting(sb)
        if acc_a != acc_b:
            return EquivResult(equal=False, counterexample=word, membership=(acc_a, acc_b))
        for c in alpha:
            nxt = (ra.step(sa, c), rb.step(sb, c))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + c))
    return EquivResult(equal=True)


def residual(re: Regex, w: str, alphabet=None) -> Nfa:
    """Automaton for the suffix language { x | w·x ∈ L(re) }."""
    base = thompson(re, alphabet=alphabet)
    for c in w:
        if c not in base.alphabet:
            raise AlphabetError(f"symbol {c!r} not in alphabet {sorted(base.alphabet)}")
    runner = _Runner(base)
    subset = runner.start()
    for c in w:
        subset = runner.step(subset, c)
    fresh = max(base.states, default=0) + 1
    transitions = set(base.transitions) | {(fresh, EPSILON, s) for s in subset}
    return Nfa(states=base.states | {fresh}, alphabet=base.alphabet,
               transitions=frozenset(transitions), initial=fresh,
               accepting=base.accepting)


# ---------------------------------------------------------------------------
# Block automata for the RE-to-NFA exercise


@dataclass(frozen=True)
class BlockRegion:
    """A block state: a labeled region of the automaton with entry and exit."""

    label: Regex
    entry: object
    exit: object
    inner: frozenset = field(default_factory=frozenset)

    def members(self) -> frozenset:
        return self.inner | {self.entry, self.exit}


@dataclass(frozen=True)
class BlockNfa:
    """An ε-NFA attempt annotated with block regions."""

    nfa: Nfa
    blocks: tuple[BlockRegion, ...] = ()

    def __post_init__(self):
        for b in self.blocks:
            if not b.members() <= self.nfa.states:
                raise ValueError(f"block {print_regex(b.label)!r} references unknown states")
        # nesting must be a tree: any two regions are disjoint or nested
        for x, y in itertools.combinations(self.blocks, 2):
            mx, my = x.members(), y.members()
            if not (mx.isdisjoint(my) or mx <= my or my <= mx):
                raise ValueError("block regions overlap without nesting")

    def block_automaton(self, block: BlockRegion) -> Nfa:
        """The sub-automaton between a block's entry and exit, fully expanded.

        A direct exit→entry edge is the enclosing star constructor's repeat
        plumbing, not block content, and is excluded; repeat edges inside a
        starred block run between its inner states and stay in.
        """
        members = block.members()
        trans = frozenset(
            t for t in self.nfa.transitions
            if t[0] in members and t[2] in members
            and not (t[0] == block.exit and t[2] == block.entry and block.exit != block.entry))
        return Nfa(states=members, alphabet=self.nfa.alphabet, transitions=trans,
                   initial=block.entry, accepting=frozenset({block.exit}))

"""Context-free substrate: grammars, CNF, CYK, derivations, bounded enumeration.

Text format: one production group per line, `Head -> body1 | body2`. Bodies
are juxtaposed symbols (uppercase = nonterminal, lowercase/digit = terminal),
`eps` for the empty body, `#` starts a comment line.
"""

from __future__ import annotations

import itertools
import time
import warnings
from dataclasses import dataclass

from .errors import (
    DuplicateProductionWarning,
    EmptyLanguageError,
    NotCnfError,
    ParseError,
)


@dataclass(frozen=True)
class Production:
    head: str
    body: tuple[str, ...]

    def __str__(self):
        return f"{self.head} -> {''.join(self.body) or 'eps'}"


@dataclass(frozen=True)
class Cfg:
    nonterminals: frozenset[str]
    terminals: frozenset[str]
    start: str
    productions: tuple[Production, ...]

    def __post_init__(self):
        if self.nonterminals & self.terminals:
            raise ValueError("nonterminals and terminals overlap")
        if self.start not in self.nonterminals:
            raise ValueError("start symbol is not a nonterminal")
        seen = set()
        for p in self.productions:
            if p.head not in self.nonterminals:
                raise ValueError(f"unknown head {p.head!r}")
            for s in p.body:
                if s not in self.nonterminals and s not in self.terminals:
                    raise ValueError(f"unknown symbol {s!r} in {p}")
            if p in seen:
                raise ValueError(f"duplicate production {p}")
            seen.add(p)

    def by_head(self) -> dict[str, list[tuple[str, ...]]]:
        out: dict[str, list[tuple[str, ...]]] = {}
        for p in self.productions:
            out.setdefault(p.head, []).append(p.body)
        return out


def parse_cfg(text: str) -> Cfg:
    """Parse grammar text; the first production's head is the start symbol.

    Exact duplicate productions are dropped with a DuplicateProductionWarning.
    """
    productions: list[Production] = []
    duplicates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        head_part, arrow, body_part = line.partition("->")
        if not arrow:
            raise ParseError("missing '->'", line=lineno, column=len(line) + 1, expected="'->'")
        head = head_part.strip()
        if len(head) != 1 or not head.isupper():
            raise ParseError(f"bad head {head!r}", line=lineno, column=1,
                             expected="single uppercase nonterminal")
        body_col = len(head_part) + 3
        for alt in body_part.split("|"):
            symbols: list[str] = []
            stripped = alt.strip()
            if stripped == "eps":
                body: tuple[str, ...] = ()
            elif "eps" in stripped.replace(" ", ""):
                col = body_col + alt.index("e")
                raise ParseError("'eps' cannot be mixed with other symbols",
                                 line=lineno, column=col)
            else:
                for off, ch in enumerate(alt):
                    if ch.isspace():
                        continue
                    if ch.isupper() or ch.islower() or ch.isdigit():
                        symbols.append(ch)
                    else:
                        raise ParseError(f"bad symbol {ch!r}", line=lineno,
                                         column=body_col + off,
                                         expected="letter or digit")
                if not symbols:
                    raise ParseError("empty body", line=lineno, column=body_col,
                                     expected="symbols or 'eps'")
                body = tuple(symbols)
            prod = Production(head, body)
            if prod in productions:
                duplicates.append(prod)
            else:
                productions.append(prod)
            body_col += len(alt) + 1
    if not productions:
        raise ParseError("no productions", expected="at least one production")
    if duplicates:
        warnings.warn(f"dropped duplicate productions: {', '.join(map(str, duplicates))}",
                      DuplicateProductionWarning)
    nonterminals = {p.head for p in productions}
    nonterminals |= {s for p in productions for s in p.body if s.isupper()}
    terminals = {s for p in productions for s in p.body if not s.isupper()}
    return Cfg(nonterminals=frozenset(nonterminals), terminals=frozenset(terminals),
               start=productions[0].head, productions=tuple(productions))


def print_cfg(g: Cfg) -> str:
    """Canonical text: start symbol's group first, groups in first-appearance order."""
    order: list[str] = []
    groups: dict[str, list[str]] = {}
    for p in g.productions:
        if p.head not in groups:
            order.append(p.head)
            groups[p.head] = []
        groups[p.head].append("".join(p.body) or "eps")
    if order and order[0] != g.start and g.start in groups:
        order.remove(g.start)
        order.insert(0, g.start)
    return "\n".join(f"{h} -> {' | '.join(groups[h])}" for h in order)


# ---------------------------------------------------------------------------
# sanitization


def generating_nonterminals(g: Cfg) -> frozenset[str]:
    gen: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.head not in gen and all(s in g.terminals or s in gen for s in p.body):
                gen.add(p.head)
                changed = True
    return frozenset(gen)


def sanitize(g: Cfg) -> Cfg:
    """Drop non-generating and unreachable nonterminals; language preserved."""
    gen = generating_nonterminals(g)
    if g.start not in gen:
        raise EmptyLanguageError(f"start symbol {g.start!r} derives no word")
    kept = [p for p in g.productions
            if p.head in gen and all(s in g.terminals or s in gen for s in p.body)]
    reachable = {g.start}
    changed = True
    while changed:
        changed = False
        for p in kept:
            if p.head in reachable:
                for s in p.body:
                    if s in g.nonterminals and s not in reachable:
                        reachable.add(s)
                        changed = True
    kept = [p for p in kept if p.head in reachable]
    return Cfg(nonterminals=frozenset(gen & reachable), terminals=g.terminals,
               start=g.start, productions=tuple(kept))


# ---------------------------------------------------------------------------
# Chomsky normal form


@dataclass(frozen=True)
class CnfViolation:
    index: int
    category: str  # body-length | symbol-mix | illegal-epsilon | start-on-rhs
    message: str


@dataclass(frozen=True)
class CnfCheck:
    ok: bool
    violations: tuple[CnfViolation, ...] = ()


def is_cnf(g: Cfg) -> CnfCheck:
    """CNF predicate: head→BC, head→a, or start→ε with start on no right side."""
    start_on_rhs = any(g.start in p.body for p in g.productions)
    violations: list[CnfViolation] = []
    for i, p in enumerate(g.productions):
        if len(p.body) == 0:
            if p.head != g.start:
                violations.append(CnfViolation(i, "illegal-epsilon",
                                               f"{p}: only the start symbol may derive eps"))
            elif start_on_rhs:
                violations.append(CnfViolation(i, "start-on-rhs",
                                               f"{p}: start occurs on a right-hand side"))
        elif len(p.body) == 1:
            if p.body[0] not in g.terminals:
                violations.append(CnfViolation(i, "symbol-mix",
                                               f"{p}: single-symbol body must be a terminal"))
        elif len(p.body) == 2:
            if not all(s in g.nonterminals for s in p.body):
                violations.append(CnfViolation(i, "symbol-mix",
                                               f"{p}: two-symbol body must be nonterminals"))
        else:
            violations.append(CnfViolation(i, "body-length",
                                           f"{p}: body longer than two symbols"))
    return CnfCheck(ok=not violations, violations=tuple(violations))


def nullable_nonterminals(g: Cfg) -> frozenset[str]:
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            if p.head not in nullable and all(s in nullable for s in p.body):
                nullable.add(p.head)
                changed = True
    return frozenset(nullable)


def to_cnf(g: Cfg) -> Cfg:
    """Textbook CNF conversion; internal nonterminal names may be multi-character."""
    start = g.start
    prods: list[tuple[str, tuple[str, ...]]] = [(p.head, p.body) for p in g.productions]
    nonterminals = set(g.nonterminals)
    if any(start in body for _, body in prods):
        fresh_start = _fresh_name("S'", nonterminals)
        nonterminals.add(fresh_start)
        prods.insert(0, (fresh_start, (start,)))
        start = fresh_start

    # ε elimination
    nullable = nullable_nonterminals(Cfg(frozenset(nonterminals), g.terminals, start,
                                         tuple(Production(h, b) for h, b in dict.fromkeys(prods))))
    expanded: dict[tuple[str, tuple[str, ...]], None] = {}
    for head, body in prods:
        null_at = [i for i, s in enumerate(body) if s in nullable]
        for mask in range(1 << len(null_at)):
            drop = {null_at[k] for k in range(len(null_at)) if mask >> k & 1}
            new_body = tuple(s for i, s in enumerate(body) if i not in drop)
            if new_body or head == start:
                expanded[(head, new_body)] = None
    prods = list(expanded)

    # unit elimination
    unit_of: dict[str, set[str]] = {nt: {nt} for nt in nonterminals}
    changed = True
    while changed:
        changed = False
        for head, body in prods:
            if len(body) == 1 and body[0] in nonterminals:
                for src, closure in unit_of.items():
                    if head in closure and body[0] not in closure:
                        closure.add(body[0])
                        changed = True
    non_unit = [(h, b) for h, b in prods if not (len(b) == 1 and b[0] in nonterminals)]
    prods = list(dict.fromkeys(
        (src, body) for src, closure in unit_of.items()
        for head, body in non_unit if head in closure))

    # drop useless symbols so CYK tables stay small
    tmp = Cfg(frozenset(nonterminals), g.terminals, start,
              tuple(Production(h, b) for h, b in dict.fromkeys(prods)))
    tmp = sanitize(tmp)
    prods = [(p.head, p.body) for p in tmp.productions]
    nonterminals = set(tmp.nonterminals)

    # TERM: terminals only in unit bodies
    term_nt: dict[str, str] = {}
    out: list[tuple[str, tuple[str, ...]]] = []
    for head, body in prods:
        if len(body) >= 2:
            new_body = []
            for s in body:
                if s in g.terminals:
                    if s not in term_nt:
                        term_nt[s] = _fresh_name(f"T{s}", nonterminals)
                        nonterminals.add(term_nt[s])
                    new_body.append(term_nt[s])
                else:
                    new_body.append(s)
            out.append((head, tuple(new_body)))
        else:
            out.append((head, body))
    for s, nt in term_nt.items():
        out.append((nt, (s,)))

    # BIN: binarize long bodies
    final: list[tuple[str, tuple[str, ...]]] = []
    counter = itertools.count()
    for head, body in out:
        while len(body) > 2:
            link = _fresh_name(f"B{next(counter)}", nonterminals)
            nonterminals.add(link)
            final.append((head, (body[0], link)))
            head, body = link, body[1:]
        final.append((head, body))
    return Cfg(nonterminals=frozenset(nonterminals), terminals=g.terminals, start=start,
               productions=tuple(Production(h, b) for h, b in dict.fromkeys(final)))


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# CYK


@dataclass(frozen=True)
class CykTable:
    """Triangular table: cell(i, length) = nonterminals deriving word[i:i+length]."""

    word: str
    cells: dict[tuple[int, int], frozenset[str]]

    def cell(self, i: int, length: int) -> frozenset[str]:
        return self.cells.get((i, length), frozenset())

    def row(self, length: int) -> list[frozenset[str]]:
        return [self.cell(i, length) for i in range(len(self.word) - length + 1)]

    def accepts(self, start: str) -> bool:
        return start in self.cell(0, len(self.word))


def cyk_decide(g: Cfg, w: str) -> CykTable:
    """Ground-truth CYK table for a CNF grammar and a nonempty word."""
    check = is_cnf(g)
    if not check.ok:
        raise NotCnfError("; ".join(v.message for v in check.violations))
    if not w:
        raise ValueError("CYK needs a nonempty word; decide eps via start -> eps")
    n = len(w)
    unit: dict[str, set[str]] = {}
    pairs: list[tuple[str, str, str]] = []
    for p in g.productions:
        if len(p.body) == 1:
            unit.setdefault(p.body[0], set()).add(p.head)
        elif len(p.body) == 2:
            pairs.append((p.head, p.body[0], p.body[1]))
    cells: dict[tuple[int, int], frozenset[str]] = {}
    for i, c in enumerate(w):
        cells[(i, 1)] = frozenset(unit.get(c, set()))
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            found = set()
            for split in range(1, length):
                left = cells[(i, split)]
                right = cells[(i + split, length - split)]
                if left and right:
                    for head, x, y in pairs:
                        if x in left and y in right:
                            found.add(head)
            cells[(i, length)] = frozenset(found)
    return CykTable(word=w, cells=cells)


def cfg_accepts(g: Cfg, w: str, cnf: Cfg | None = None) -> bool:
    """Membership for a general CFG; converts to CNF internally unless provided."""
    cnf = cnf if cnf is not None else to_cnf(g)
    if w == "":
        return any(p.head == cnf.start and p.body == () for p in cnf.productions)
    return cnf.start in cyk_decide(cnf, w).cell(0, len(w))


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Derivation:
    mode: str  # any | leftmost | rightmost
    steps: tuple[str, ...]


@dataclass(frozen=True)
class DerivationVerdict:
    ok: bool
    bad_step: int | None = None  # 0-based index into steps of the offending form
    reason: str | None = None    # wrong-start | no-single-production | wrong-occurrence | wrong-result


def check_derivation(g: Cfg, d: Derivation, target: str) -> DerivationVerdict:
    """Validate a step-by-step derivation of `target` under the given mode."""
    if d.mode not in ("any", "leftmost", "rightmost"):
        raise ValueError(f"unknown derivation mode {d.mode!r}")
    if not d.steps:
        return DerivationVerdict(False, 0, "wrong-start")
    if d.steps[0] != g.start:
        return DerivationVerdict(False, 0, "wrong-start")
    by_head = g.by_head()
    for idx in range(1, len(d.steps)):
        prev, cur = d.steps[idx - 1], d.steps[idx]
        nt_positions = [i for i, s in enumerate(prev) if s in g.nonterminals]
        valid_positions = set()
        for i in nt_positions:
            for body in by_head.get(prev[i], ()):
                if prev[:i] + "".join(body) + prev[i + 1:] == cur:
                    valid_positions.add(i)
        if not valid_positions:
            return DerivationVerdict(False, idx, "no-single-production")
        if d.mode == "leftmost" and nt_positions[0] not in valid_positions:
            return DerivationVerdict(False, idx, "wrong-occurrence")
        if d.mode == "rightmost" and nt_positions[-1] not in valid_positions:
            return DerivationVerdict(False, idx, "wrong-occurrence")
    if d.steps[-1] != target:
        return DerivationVerdict(False, len(d.steps) - 1, "wrong-result")
    return DerivationVerdict(True)


# ---------------------------------------------------------------------------
# bounded enumeration


@dataclass(frozen=True)
class Enumeration:
    words: frozenset[str]
    lengths_completed: int


def enumerate_words(g: Cfg, budget: float, max_len: int | None = None) -> Enumeration:
    """Accepted words, length by length, within a wall-clock budget.

    Returns all accepted words of length <= lengths_completed, the largest
    length whose words were all decided before the deadline. Deterministic
    given (g, lengths_completed). Membership is CYK on a one-off internal CNF.
    """
    if budget <= 0 and max_len is None:
        raise ValueError("budget must be positive")
    deadline = time.monotonic() + budget
    try:
        cnf = to_cnf(g)
    except EmptyLanguageError:
        limit = max_len if max_len is not None else 0
        return Enumeration(frozenset(), limit)
    symbols = sorted(g.terminals)
    words: set[str] = set()
    completed = -1
    length = 0
    while max_len is None or length <= max_len:
        found: list[str] = []
        if length == 0:
            if cfg_accepts(g, "", cnf=cnf):
                found.append("")
        else:
            if not symbols:
                completed = max_len if max_len is not None else length
                break
            ran_out = False
            for tup in itertools.product(symbols, repeat=length):
                if time.monotonic() > deadline:
                    ran_out = True
                    break
                w = "".join(tup)
                if cfg_accepts(g, w, cnf=cnf):
                    found.append(w)
            if ran_out:
                break
        words.update(found)
        completed = length
        length += 1
        if max_len is None and time.monotonic() > deadline:
            break
    return Enumeration(frozenset(words), completed)


def bounded_language(g: Cfg, max_len: int, max_words: int | None = None) -> frozenset[str]:
    """All words of length <= max_len, by a length-stratified bottom-up fixpoint.

    `max_words` stops the fixpoint early once the start symbol holds more than
    that many words; the result is then a subset, which suffices for
    threshold checks.
    """
    by_len: dict[str, list[set[str]]] = {
        nt: [set() for _ in range(max_len + 1)] for nt in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            strat: dict[int, set[str]] = {0: {""}}
            for s in p.body:
                nxt: dict[int, set[str]] = {}
                if s in g.terminals:
                    for length, words in strat.items():
                        if length + 1 <= max_len:
                            nxt.setdefault(length + 1, set()).update(w + s for w in words)
                else:
                    pools = by_len[s]
                    for length, words in strat.items():
                        for extra in range(max_len - length + 1):
                            pool = pools[extra]
                            if pool:
                                target = nxt.setdefault(length + extra, set())
                                target.update(w + v for w in words for v in pool)
                strat = nxt
                if not strat:
                    break
            for length, words in strat.items():
                target = by_len[p.head][length]
                if not words <= target:
                    target |= words
                    changed = True
        if max_words is not None and sum(len(s) for s in by_len[g.start]) > max_words:
            break
    return frozenset(w for bucket in by_len[g.start] for w in bucket)


def shortest_word_length(g: Cfg, cap: int = 12) -> int | None:
    """Length of a shortest derivable word, or None if none within `cap`.

    Numeric fixpoint over minimum derivation lengths; never builds word sets.
    """
    infinity = cap + 1
    shortest: dict[str, int] = {nt: infinity for nt in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            total = 0
            for s in p.body:
                total += 1 if s in g.terminals else shortest[s]
                if total >= infinity:
                    break
            if total < shortest[p.head]:
                shortest[p.head] = total
                changed = True
    return shortest[g.start] if shortest[g.start] <= cap else None

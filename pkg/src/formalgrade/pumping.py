"""Arithmetic block languages and the pumping-lemma game.

A language is an ordered list of blocks, each a terminal with an exponent
(variable or constant), plus integer comparisons between exponents, e.g.
blocks a^i b^j with constraint i < j. Non-regular game languages also carry an
unpumpable word template: per-block exponents affine in the bound n, e.g.
a^n b^{n+1}.

In the game the student claims regular/nonregular and then instantiates one
side of the lemma's quantifiers while the tutor instantiates the other; the
tutor plays to win whenever the claim is wrong and exploits weak moves even
when it is right.
"""

from __future__ import annotations

import itertools
import re as _re
from dataclasses import dataclass, replace

from .errors import IllegalMove, ParseError

REGULAR = "regular"
NONREGULAR = "nonregular"
STUDENT = "student"
TUTOR = "tutor"

#: extra pump counts beyond n the tutor searches when hunting a breaking i
PUMP_SEARCH_SLACK = 2


@dataclass(frozen=True)
class Block:
    symbol: str
    exponent: str | int  # variable name or constant


@dataclass(frozen=True)
class Affine:
    """var + offset, or a bare constant when var is None."""

    var: str | None
    offset: int

    def eval(self, env: dict[str, int]) -> int:
        return (env[self.var] if self.var else 0) + self.offset


@dataclass(frozen=True)
class Constraint:
    left: Affine
    op: str  # '=' | '<' | '<='
    right: Affine

    def holds(self, env: dict[str, int]) -> bool:
        l, r = self.left.eval(env), self.right.eval(env)
        return l == r if self.op == "=" else l < r if self.op == "<" else l <= r


@dataclass(frozen=True)
class ArithLang:
    alphabet: frozenset[str]
    blocks: tuple[Block, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        exps = {b.exponent for b in self.blocks if isinstance(b.exponent, str)}
        for c in self.constraints:
            for side in (c.left, c.right):
                if side.var is not None and side.var not in exps:
                    raise ValueError(f"constraint variable {side.var!r} is not a block exponent")
        for b in self.blocks:
            if b.symbol not in self.alphabet:
                raise ValueError(f"block symbol {b.symbol!r} not in alphabet")

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for b in self.blocks:
            if isinstance(b.exponent, str):
                seen.setdefault(b.exponent)
        return tuple(seen)

    def max_constant(self) -> int:
        consts = [abs(side.offset) for c in self.constraints for side in (c.left, c.right)]
        consts += [b.exponent for b in self.blocks if isinstance(b.exponent, int)]
        return max(consts, default=0)


@dataclass(frozen=True)
class TemplateBlock:
    symbol: str
    times_n: int
    offset: int

    def count(self, n: int) -> int:
        return self.times_n * n + self.offset


def instantiate_template(template: tuple[TemplateBlock, ...], n: int) -> str:
    return "".join(t.symbol * t.count(n) for t in template)


# ---------------------------------------------------------------------------
# parsing helpers for payload documents


_AFFINE = _re.compile(r"^([a-z])?\s*([+-]\s*\d+)?$|^(\d+)$")


def parse_affine(text: str) -> Affine:
    m = _AFFINE.match(text.strip())
    if not m:
        raise ParseError(f"bad arithmetic term {text!r}", expected="var, var±const or const")
    if m.group(3) is not None:
        return Affine(None, int(m.group(3)))
    var = m.group(1)
    offset = int(m.group(2).replace(" ", "")) if m.group(2) else 0
    if var is None and m.group(2) is None:
        raise ParseError(f"bad arithmetic term {text!r}", expected="var, var±const or const")
    return Affine(var, offset)


def parse_constraint(text: str) -> Constraint:
    for op in ("<=", ">=", "=", "<", ">"):
        if op in text:
            left, _, right = text.partition(op)
            l, r = parse_affine(left), parse_affine(right)
            if op == ">":
                return Constraint(r, "<", l)
            if op == ">=":
                return Constraint(r, "<=", l)
            return Constraint(l, op, r)
    raise ParseError(f"no comparison in {text!r}", expected="=, <, <=, > or >=")


_EXPONENT = _re.compile(r"^(?:(\d+)|(\d*)n\s*([+-]\s*\d+)?)$")


def parse_template_block(symbol: str, exponent: str) -> TemplateBlock:
    m = _EXPONENT.match(exponent.replace(" ", ""))
    if not m:
        raise ParseError(f"bad template exponent {exponent!r}", expected="c, n, kn or kn±c")
    if m.group(1) is not None:
        return TemplateBlock(symbol, 0, int(m.group(1)))
    times = int(m.group(2)) if m.group(2) else 1
    offset = int(m.group(3).replace(" ", "")) if m.group(3) else 0
    return TemplateBlock(symbol, times, offset)


def lang_from_doc(doc: dict) -> ArithLang:
    blocks = []
    for b in doc["blocks"]:
        exp = b["exponent"]
        blocks.append(Block(b["symbol"], exp if isinstance(exp, int) else str(exp)))
    return ArithLang(
        alphabet=frozenset(doc["alphabet"]),
        blocks=tuple(blocks),
        constraints=tuple(parse_constraint(c) for c in doc.get("constraints", [])),
    )


def lang_to_doc(lang: ArithLang) -> dict:
    def affine_str(a: Affine) -> str:
        if a.var is None:
            return str(a.offset)
        if a.offset == 0:
            return a.var
        return f"{a.var}{'+' if a.offset > 0 else '-'}{abs(a.offset)}"

    return {
        "alphabet": sorted(lang.alphabet),
        "blocks": [{"symbol": b.symbol, "exponent": b.exponent} for b in lang.blocks],
        "constraints": [f"{affine_str(c.left)} {c.op} {affine_str(c.right)}"
                        for c in lang.constraints],
    }


def template_from_doc(doc: list) -> tuple[TemplateBlock, ...]:
    return tuple(parse_template_block(t["symbol"], str(t["exponent"])) for t in doc)


def template_to_doc(template: tuple[TemplateBlock, ...]) -> list:
    def exp_str(t: TemplateBlock) -> str:
        if t.times_n == 0:
            return str(t.offset)
        head = "n" if t.times_n == 1 else f"{t.times_n}n"
        if t.offset == 0:
            return head
        return f"{head}{'+' if t.offset > 0 else '-'}{abs(t.offset)}"

    return [{"symbol": t.symbol, "exponent": exp_str(t)} for t in template]


# ---------------------------------------------------------------------------
# membership


def arith_member(lang: ArithLang, w: str) -> bool:
    """Whether some nonnegative exponent assignment matches w and the constraints.

    Block boundaries are forced where adjacent terminals differ; runs of equal
    terminals are resolved by backtracking over split points.
    """
    if any(c not in lang.alphabet for c in w):
        return False
    blocks = lang.blocks

    def go(idx: int, pos: int, env: dict[str, int]) -> bool:
        if idx == len(blocks):
            return pos == len(w) and all(c.holds(env) for c in lang.constraints)
        b = blocks[idx]
        if isinstance(b.exponent, int):
            counts: list[int] = [b.exponent]
        elif b.exponent in env:
            counts = [env[b.exponent]]
        else:
            max_run = 0
            while pos + max_run < len(w) and w[pos + max_run] == b.symbol:
                max_run += 1
            counts = list(range(max_run + 1))
        for count in counts:
            if pos + count > len(w) or any(w[pos + k] != b.symbol for k in range(count)):
                continue
            new_env = env
            if isinstance(b.exponent, str) and b.exponent not in env:
                new_env = {**env, b.exponent: count}
            if go(idx + 1, pos + count, new_env):
                return True
        return False

    return go(0, 0, {})


def words_of(lang: ArithLang, min_len: int, max_len: int) -> list[str]:
    """All members with min_len <= |w| <= max_len, sorted by (length, word)."""
    out = set()
    bound = max_len
    options = []
    for b in lang.blocks:
        if isinstance(b.exponent, int):
            options.append((b, (b.exponent,)))
        else:
            options.append((b, tuple(range(bound + 1))))
    names = [b.exponent for b, _ in options if isinstance(b.exponent, str)]
    for combo in itertools.product(*(counts for _, counts in options)):
        env: dict[str, int] = {}
        ok = True
        total = 0
        parts = []
        for (b, _), count in zip(options, combo):
            if isinstance(b.exponent, str):
                if b.exponent in env and env[b.exponent] != count:
                    ok = False
                    break
                env[b.exponent] = count
            total += count
            parts.append(b.symbol * count)
        if not ok or not (min_len <= total <= max_len):
            continue
        if all(c.holds(env) for c in lang.constraints):
            out.add("".join(parts))
    return sorted(out, key=lambda w: (len(w), w))


# ---------------------------------------------------------------------------
# game engine


@dataclass(frozen=True)
class GameState:
    claim: str | None = None   # regular | nonregular
    phase: str = "claim"       # claim | choose_n | choose_word | choose_split | choose_i | done
    n: int | None = None
    w: str | None = None
    split: tuple[str, str, str] | None = None
    i: int | None = None
    winner: str | None = None


def all_splits(w: str, n: int):
    """Legal (x, y, z) with w = xyz, |xy| <= n, y nonempty, in (|x|, |y|) order."""
    for lx in range(min(n, len(w)) + 1):
        for ly in range(1, min(n - lx, len(w) - lx) + 1):
            yield w[:lx], w[lx:lx + ly], w[lx + ly:]


def sound_bound(lang: ArithLang) -> int:
    """A pumping constant that is safe for this restricted language family."""
    return len(lang.blocks) * (lang.max_constant() + 1) + 1


def _breaking_i(lang: ArithLang, x: str, y: str, z: str, n: int) -> int | None:
    for i in range(0, n + PUMP_SEARCH_SLACK + 1):
        if not arith_member(lang, x + y * i + z):
            return i
    return None


def _split_score(lang: ArithLang, x: str, y: str, z: str, n: int, i_range: int) -> int:
    return sum(1 for i in range(i_range + 1) if arith_member(lang, x + y * i + z))


def tutor_pick_word(lang: ArithLang, regular: bool,
                    template: tuple[TemplateBlock, ...] | None, n: int) -> str | None:
    """The tutor's word after the student claims regular and fixes n."""
    if not regular:
        if template is None:
            raise ValueError("non-regular game language needs an unpumpable template")
        return instantiate_template(template, max(n, 1))
    # claim is right: hunt for the word leaving the fewest safe splits
    candidates = words_of(lang, n, n + len(lang.blocks) * (lang.max_constant() + 2) + 2)
    best: tuple[int, str] | None = None
    for w in candidates:
        safe = sum(1 for x, y, z in all_splits(w, n) if _breaking_i(lang, x, y, z, n) is None)
        if safe == 0:
            return w
        if best is None or safe < best[0]:
            best = (safe, w)
    return best[1] if best else None


def tutor_pick_split(lang: ArithLang, w: str, n: int) -> tuple[str, str, str] | None:
    """The split that pumps for the most tested exponents (all, if one exists)."""
    i_range = max(n + PUMP_SEARCH_SLACK, 12)
    best: tuple[int, tuple[str, str, str]] | None = None
    for x, y, z in all_splits(w, n):
        score = _split_score(lang, x, y, z, n, i_range)
        if score == i_range + 1:
            return (x, y, z)
        if best is None or score > best[0]:
            best = (score, (x, y, z))
    return best[1] if best else None


def pumping_game_step(payload: dict, state: GameState, move: dict) -> GameState:
    """Apply one student move; the tutor answers immediately where it is on turn.

    `payload` holds: lang (ArithLang), regular (bool), template (unpumpable
    word template or None). Illegal moves raise IllegalMove and leave the
    state unchanged.
    """
    lang: ArithLang = payload["lang"]
    regular: bool = payload["regular"]
    template = payload.get("template")
    kind = move.get("kind")
    if state.phase == "done":
        raise IllegalMove("the game is over")
    if kind != {"claim": "claim", "choose_n": "n", "choose_word": "word",
                "choose_split": "split", "choose_i": "i"}[state.phase]:
        raise IllegalMove(f"expected a {state.phase} move, got {kind!r}")

    if kind == "claim":
        claim = move.get("claim")
        if claim not in (REGULAR, NONREGULAR):
            raise IllegalMove("claim must be 'regular' or 'nonregular'")
        if claim == REGULAR:
            return GameState(claim=claim, phase="choose_n")
        n = sound_bound(lang)
        return GameState(claim=claim, phase="choose_word", n=n)

    if kind == "n":
        n = move.get("n")
        if not isinstance(n, int) or n < 1:
            raise IllegalMove("the bound n must be a positive integer")
        w = tutor_pick_word(lang, regular, template, n)
        if w is None:
            # no word of length >= n exists; the pumping property holds vacuously
            return replace(state, phase="done", n=n, winner=STUDENT)
        return replace(state, phase="choose_split", n=n, w=w)

    if kind == "word":
        w = move.get("word")
        if not isinstance(w, str):
            raise IllegalMove("the word must be a string")
        if len(w) < state.n:
            raise IllegalMove(f"the word must have at least n = {state.n} symbols")
        if not arith_member(lang, w):
            raise IllegalMove("the word is not in the language")
        split = tutor_pick_split(lang, w, state.n)
        if split is None:
            return replace(state, phase="done", w=w, winner=STUDENT)
        return replace(state, phase="choose_i", w=w, split=split)

    if kind == "split":
        x, y, z = move.get("x"), move.get("y"), move.get("z")
        if not all(isinstance(part, str) for part in (x, y, z)):
            raise IllegalMove("the split needs string parts x, y, z")
        if x + y + z != state.w:
            raise IllegalMove("the split must satisfy w = xyz")
        if len(x) + len(y) > state.n:
            raise IllegalMove(f"|xy| must be at most n = {state.n}")
        if y == "":
            raise IllegalMove("y must be nonempty")
        i = _breaking_i(lang, x, y, z, state.n)
        if i is None:
            # concede a harmless exponent; membership will confirm the student
            i = 2
        pumped_in = arith_member(lang, x + y * i + z)
        return replace(state, phase="done", split=(x, y, z), i=i,
                       winner=STUDENT if pumped_in else TUTOR)

    # kind == "i"
    i = move.get("i")
    if not isinstance(i, int) or i < 0:
        raise IllegalMove("the pump count i must be a nonnegative integer")
    x, y, z = state.split
    pumped_in = arith_member(lang, x + y * i + z)
    return replace(state, phase="done", i=i,
                   winner=TUTOR if pumped_in else STUDENT)


def game_transcript(payload: dict, state: GameState) -> list[str]:
    """Human-readable move list; replayable because tutor moves are deterministic."""
    lang: ArithLang = payload["lang"]
    student_first = state.claim == REGULAR
    lines = [f"claim (student): the language is {state.claim}"]
    if state.n is not None:
        lines.append(f"bound n = {state.n} ({'student' if student_first else 'tutor'})")
    if state.w is not None:
        lines.append(f"word w = {state.w!r} ({'tutor' if student_first else 'student'})")
    if state.split is not None:
        x, y, z = state.split
        lines.append(f"split x = {x!r}, y = {y!r}, z = {z!r} "
                     f"({'student' if student_first else 'tutor'})")
    if state.i is not None and state.split is not None:
        x, y, z = state.split
        pumped = x + y * state.i + z
        member = arith_member(lang, pumped)
        lines.append(f"pump count i = {state.i} ({'tutor' if student_first else 'student'})")
        lines.append(f"x y^i z = {pumped!r} is {'in' if member else 'not in'} the language")
    if state.winner:
        lines.append(f"winner: {state.winner}")
    return lines


def game_state_to_doc(state: GameState) -> dict:
    return {
        "claim": state.claim,
        "phase": state.phase,
        "n": state.n,
        "w": state.w,
        "split": list(state.split) if state.split else None,
        "i": state.i,
        "winner": state.winner,
    }


def game_state_from_doc(doc: dict) -> GameState:
    return GameState(
        claim=doc.get("claim"),
        phase=doc.get("phase", "claim"),
        n=doc.get("n"),
        w=doc.get("w"),
        split=tuple(doc["split"]) if doc.get("split") else None,
        i=doc.get("i"),
        winner=doc.get("winner"),
    )


# ---------------------------------------------------------------------------
# bundled sample languages


def _mk(alphabet: str, blocks: list, constraints: list[str] = (),
        template: list | None = None, regular: bool = True):
    lang = ArithLang(
        alphabet=frozenset(alphabet),
        blocks=tuple(Block(s, e) for s, e in blocks),
        constraints=tuple(parse_constraint(c) for c in constraints),
    )
    tmpl = tuple(parse_template_block(s, e) for s, e in template) if template else None
    return {"lang": lang, "regular": regular, "template": tmpl}


#: name -> game payload; at least three regular and three non-regular languages
SAMPLE_LANGUAGES: dict[str, dict] = {
    # regular
    "a-star-b-star": _mk("ab", [("a", "i"), ("b", "j")]),
    "aa-then-bs": _mk("ab", [("a", 2), ("b", "i")]),
    "a-star": _mk("a", [("a", "i")]),
    "few-as-then-bs": _mk("ab", [("a", "i"), ("b", "j")], ["i < 3"]),
    # non-regular
    "fewer-as-than-bs": _mk("ab", [("a", "i"), ("b", "j")], ["i < j"],
                            template=[("a", "n"), ("b", "n+1")], regular=False),
    "equal-as-and-bs": _mk("ab", [("a", "i"), ("b", "j")], ["i = j"],
                           template=[("a", "n"), ("b", "n")], regular=False),
    "as-lead-by-at-most-two": _mk("ab", [("a", "i"), ("b", "j")], ["j <= i", "i <= j+2"],
                                  template=[("a", "n"), ("b", "n")], regular=False),
}

"""Automatic problem generation: sample candidates, score quality and
difficulty, pick the best inside the requested band.

Each call draws exactly CANDIDATES_PER_REQUEST candidates from the seeded
generator for the kind, discards those with qual = 0 (trivial or infeasible)
or difficulty outside [d_min, d_max], and returns the highest-quality survivor
(ties to the earliest candidate). Everything is a pure function of the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import documents
from .documents import Problem
from .errors import EmptyLanguageError, NoCandidateInBand
from .grammar import (
    Cfg,
    Production,
    bounded_language,
    cfg_accepts,
    is_cnf,
    print_cfg,
    sanitize,
    shortest_word_length,
    to_cnf,
)
from .machines import Assign, Branch, Loop, WhileProgram, print_while, run_while
from .programs import BASE_PROGRAMS

CANDIDATES_PER_REQUEST = 100

# CFG generator ranges
NONTERMINAL_RANGE = (3, 6)
TERMINAL_RANGE = (2, 3)
PRODUCTION_RANGE = (4, 10)
BODY_LENGTH_RANGE = (0, 3)
MIN_SURVIVING_PRODUCTIONS = 3
WORD_COUNT_LENGTH = 6
CYK_WORD_LENGTHS = (3, 7)

# While generator settings
MUTATION_RANGE = (1, 4)
QUAL_INPUT_BOUND = 3
QUAL_STEP_CAP = 10_000
QUAL_BUDGET = 2.0

GENERATED_MAX_POINTS = 10

SUPPORTED_KINDS = (
    documents.CFG_WORDS,
    documents.FIND_DERIVATION,
    documents.CNF_TRANSFORM,
    documents.CYK,
    documents.WHILE_TO_TM,
)


@dataclass(frozen=True)
class GenerationRequest:
    kind: str
    d_min: int = 1
    d_max: int = 10
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.d_min <= self.d_max <= 10:
            raise ValueError("difficulty band must satisfy 1 <= d_min <= d_max <= 10")
        if self.kind not in SUPPORTED_KINDS:
            raise ValueError(f"no generator for kind {self.kind!r}; "
                             f"supported: {', '.join(SUPPORTED_KINDS)}")


@dataclass(frozen=True)
class ScoredCandidate:
    problem: Problem | None
    qual: int
    diff: int  # normalized onto 1..10; meaningful only when qual > 0


def _affine_band(raw: int, lo: int, hi: int) -> int:
    """Affine map of [lo, hi] onto the 1..10 difficulty scale, clamped."""
    if hi <= lo:
        return 1
    scaled = 1 + round(9 * (raw - lo) / (hi - lo))
    return max(1, min(10, scaled))


# ---------------------------------------------------------------------------
# CFG candidates


def _random_cfg(rng: random.Random) -> Cfg:
    nt_count = rng.randint(*NONTERMINAL_RANGE)
    t_count = rng.randint(*TERMINAL_RANGE)
    nts = ["S", "A", "B", "C", "D", "E"][:nt_count]
    ts = ["a", "b", "c"][:t_count]
    prods: list[Production] = []
    for _ in range(rng.randint(*PRODUCTION_RANGE)):
        head = rng.choice(nts)
        body = tuple(rng.choice(nts + ts)
                     for _ in range(rng.randint(*BODY_LENGTH_RANGE)))
        prods.append(Production(head, body))
    prods = list(dict.fromkeys(prods))
    if not any(p.head == "S" for p in prods):
        prods.insert(0, Production("S", (rng.choice(ts),)))
    return Cfg(frozenset(nts), frozenset(ts), "S", tuple(prods))


def _random_cnf_cfg(rng: random.Random) -> Cfg:
    """CNF-shaped draw for CYK problems (sanitizing cannot break the shape)."""
    nt_count = rng.randint(*NONTERMINAL_RANGE)
    t_count = rng.randint(*TERMINAL_RANGE)
    nts = ["S", "A", "B", "C", "D", "E"][:nt_count]
    ts = ["a", "b", "c"][:t_count]
    prods: list[Production] = []
    for _ in range(rng.randint(*PRODUCTION_RANGE)):
        head = rng.choice(nts)
        if rng.random() < 0.45:
            body: tuple[str, ...] = (rng.choice(ts),)
        else:
            body = (rng.choice(nts), rng.choice(nts))
        prods.append(Production(head, body))
    prods = list(dict.fromkeys(prods))
    if not any(p.head == "S" for p in prods):
        prods.insert(0, Production("S", (rng.choice(ts),)))
    return Cfg(frozenset(nts), frozenset(ts), "S", tuple(prods))


def _cfg_quality(g: Cfg) -> int:
    """0 for trivial/infeasible; otherwise rewards a balanced word count and
    full terminal use."""
    if len(g.productions) < MIN_SURVIVING_PRODUCTIONS:
        return 0
    count_cap = 2 ** WORD_COUNT_LENGTH
    words = bounded_language(g, WORD_COUNT_LENGTH, max_words=count_cap)
    if not words:
        return 0
    qual = 1
    if 1 < len(words) < count_cap:
        qual += 1
    used = {s for p in g.productions for s in p.body if s in g.terminals}
    if used == g.terminals:
        qual += 1
    return qual


def _random_derivation(g: Cfg, rng: random.Random, max_steps: int = 10):
    by_head = g.by_head()
    steps = [g.start]
    for _ in range(max_steps):
        cur = steps[-1]
        positions = [i for i, s in enumerate(cur) if s in g.nonterminals]
        if not positions:
            return steps
        pos = rng.choice(positions)
        bodies = by_head.get(cur[pos])
        if not bodies:
            return None
        body = rng.choice(bodies) if len(cur) <= 6 else min(bodies, key=len)
        steps.append(cur[:pos] + "".join(body) + cur[pos + 1:])
    return None


def gen_cfg_candidate(kind: str, rng: random.Random) -> ScoredCandidate:
    """One random CFG-based candidate for CfgWords / FindDerivation /
    CnfTransform / Cyk."""
    draw = _random_cnf_cfg(rng) if kind == documents.CYK else _random_cfg(rng)
    try:
        g = sanitize(draw)
    except EmptyLanguageError:
        return ScoredCandidate(None, 0, 0)
    qual = _cfg_quality(g)
    if qual == 0:
        return ScoredCandidate(None, 0, 0)
    raw_diff = len(g.productions)
    payload: dict
    if kind == documents.CFG_WORDS:
        shortest = shortest_word_length(g, cap=WORD_COUNT_LENGTH)
        raw_diff += shortest if shortest is not None else WORD_COUNT_LENGTH
        payload = {"grammar": print_cfg(g), "in_count": 2, "out_count": 2}
        lo, hi = MIN_SURVIVING_PRODUCTIONS, PRODUCTION_RANGE[1] + WORD_COUNT_LENGTH
    elif kind == documents.FIND_DERIVATION:
        steps = _random_derivation(g, rng)
        if steps is None or any(s in g.nonterminals for s in steps[-1]):
            return ScoredCandidate(None, 0, 0)
        raw_diff += len(steps) - 1
        payload = {"grammar": print_cfg(g), "word": steps[-1],
                   "mode": rng.choice(["any", "leftmost", "rightmost"])}
        lo, hi = MIN_SURVIVING_PRODUCTIONS + 1, PRODUCTION_RANGE[1] + 10
    elif kind == documents.CNF_TRANSFORM:
        violations = len(is_cnf(g).violations)
        if violations == 0:
            return ScoredCandidate(None, 0, 0)  # nothing to transform
        raw_diff += violations
        payload = {"grammar": print_cfg(g)}
        lo, hi = MIN_SURVIVING_PRODUCTIONS + 1, 2 * PRODUCTION_RANGE[1]
    else:  # CYK
        length = rng.randint(*CYK_WORD_LENGTHS)
        # sample in-language words by random derivation instead of enumerating
        in_language: list[str] = []
        for _ in range(40):
            steps = _random_derivation(g, rng, max_steps=2 * CYK_WORD_LENGTHS[1])
            if steps is None:
                continue
            w = steps[-1]
            if (CYK_WORD_LENGTHS[0] <= len(w) <= length
                    and all(s in g.terminals for s in w)):
                in_language.append(w)
        if in_language and rng.random() < 0.7:
            word = rng.choice(sorted(in_language))
        else:
            word = "".join(rng.choice(sorted(g.terminals)) for _ in range(length))
        raw_diff += len(word)
        payload = {"grammar": print_cfg(g), "word": word}
        lo, hi = MIN_SURVIVING_PRODUCTIONS + CYK_WORD_LENGTHS[0], \
            PRODUCTION_RANGE[1] + CYK_WORD_LENGTHS[1]
    try:
        problem, _ = documents.problem_from_doc(
            {"kind": kind, "max_points": GENERATED_MAX_POINTS, "payload": payload})
    except Exception:
        return ScoredCandidate(None, 0, 0)
    return ScoredCandidate(problem, qual, _affine_band(raw_diff, lo, hi))


# ---------------------------------------------------------------------------
# While candidates


def _permute_vars(stmts, perm):
    out = []
    for s in stmts:
        if isinstance(s, Assign):
            out.append(Assign(perm[s.target], perm[s.source], s.op, s.amount))
        elif isinstance(s, Loop):
            out.append(Loop(perm[s.var], _permute_vars(s.body, perm)))
        else:
            out.append(Branch(perm[s.var], _permute_vars(s.then, perm),
                              _permute_vars(s.orelse, perm)))
    return tuple(out)


def _assignments(stmts):
    for i, s in enumerate(stmts):
        if isinstance(s, Assign):
            yield stmts, i
        elif isinstance(s, Loop):
            yield from _assignments(s.body)
        else:
            yield from _assignments(s.then)
            yield from _assignments(s.orelse)


def _branches(stmts):
    for s in stmts:
        if isinstance(s, Branch):
            yield s
            yield from _branches(s.then)
            yield from _branches(s.orelse)
        elif isinstance(s, Loop):
            yield from _branches(s.body)


def _rewrite(stmts, target, replacement):
    out = []
    for s in stmts:
        if s is target:
            out.append(replacement)
        elif isinstance(s, Loop):
            out.append(Loop(s.var, _rewrite(s.body, target, replacement)))
        elif isinstance(s, Branch):
            out.append(Branch(s.var, _rewrite(s.then, target, replacement),
                              _rewrite(s.orelse, target, replacement)))
        else:
            out.append(s)
    return tuple(out)


def _mutate(program: WhileProgram, rng: random.Random) -> WhileProgram:
    body = program.body
    kinds = ["permute", "op_flip", "const"]
    if any(True for _ in _branches(body)):
        kinds.append("branch_swap")
    kind = rng.choice(kinds)
    if kind == "permute":
        perm = list(range(program.var_count))
        rng.shuffle(perm)
        body = _permute_vars(body, perm)
    elif kind == "branch_swap":
        branches = list(_branches(body))
        chosen = rng.choice(branches)
        body = _rewrite(body, chosen, Branch(chosen.var, chosen.orelse, chosen.then))
    else:
        sites = [(holder, i) for holder, i in _assignments(body)]
        if sites:
            holder, i = rng.choice(sites)
            a: Assign = holder[i]
            if kind == "op_flip":
                new = Assign(a.target, a.source, "-" if a.op == "+" else "+", a.amount)
            else:
                delta = rng.choice([-1, 1])
                new = Assign(a.target, a.source, a.op, max(0, a.amount + delta))
            body = _rewrite(body, a, new)
    return WhileProgram(program.var_count, body)


def _while_quality(p: WhileProgram, budget: float = QUAL_BUDGET) -> int:
    """0 when any small input fails to halt or the output function is constant."""
    import itertools
    import time

    deadline = time.monotonic() + budget
    outputs = set()
    for vec in itertools.product(range(QUAL_INPUT_BOUND + 1), repeat=p.var_count):
        if time.monotonic() > deadline:
            return 0
        result = run_while(p, vec, step_cap=QUAL_STEP_CAP)
        if result.status != "halted":
            return 0
        outputs.add(result.output)
    return 1 if len(outputs) > 1 else 0


def gen_while_candidate(rng: random.Random) -> ScoredCandidate:
    """Mutate a random base program; mutations keep its declared difficulty."""
    base = rng.choice(BASE_PROGRAMS)
    program = base.program
    for _ in range(rng.randint(*MUTATION_RANGE)):
        program = _mutate(program, rng)
    if _while_quality(program) == 0:
        return ScoredCandidate(None, 0, 0)
    try:
        problem, _ = documents.problem_from_doc({
            "kind": documents.WHILE_TO_TM, "max_points": GENERATED_MAX_POINTS,
            "payload": {"program": print_while(program),
                        "var_count": program.var_count}})
    except Exception:
        return ScoredCandidate(None, 0, 0)
    return ScoredCandidate(problem, 1, base.difficulty)


# ---------------------------------------------------------------------------
# selection


def generate_candidates(kind: str, seed: int) -> list[ScoredCandidate]:
    """Exactly CANDIDATES_PER_REQUEST candidates, deterministic in the seed."""
    rng = random.Random(seed)
    out = []
    for _ in range(CANDIDATES_PER_REQUEST):
        if kind == documents.WHILE_TO_TM:
            out.append(gen_while_candidate(rng))
        else:
            out.append(gen_cfg_candidate(kind, rng))
    return out


def generate(req: GenerationRequest) -> Problem:
    """Best-quality candidate within the difficulty band; ties to lowest index."""
    candidates = generate_candidates(req.kind, req.seed)
    best: ScoredCandidate | None = None
    for cand in candidates:
        if cand.qual <= 0 or not req.d_min <= cand.diff <= req.d_max:
            continue
        if best is None or cand.qual > best.qual:
            best = cand
    if best is None:
        raise NoCandidateInBand(req.kind, req.d_min, req.d_max, req.seed)
    return best.problem

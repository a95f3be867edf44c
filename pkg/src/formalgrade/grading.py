"""Graders: map (problem, attempt) to points and explanatory feedback.

Every grader is a pure function of its inputs plus an explicit time budget; a
report always satisfies 0 <= points <= max_points and carries the exact grade
fraction alongside the rounded integer points. Budget-dependent graders put
their completed bounds into report metadata so a regrade can reproduce the
report bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import documents
from .documents import Problem
from .errors import (
    AlphabetError,
    BudgetTooSmall,
    InvalidAttempt,
    NotASubexpression,
    ParseError,
)
from .grammar import (
    Cfg,
    CykTable,
    Derivation,
    check_derivation,
    cyk_decide,
    enumerate_words,
    is_cnf,
    to_cnf,
)
from .machines import INVALID_ENCODING, MultiTapeTm, WhileProgram, compare_io
from .pda import ACCEPTED, CUTOFF, Pda, pda_accepts, pda_enumerate, step_cap_for
from .pumping import GameState, arith_member, game_transcript
from .regular import (
    BlockNfa,
    Regex,
    nfa_accepts,
    parse_regex,
    print_regex,
    regular_equiv,
    residual,
    subexpressions,
    thompson,
)

INFO = "info"
WARNING = "warning"
ERROR = "error"

#: fraction of max points deducted per regex edit
EDIT_PENALTY = Fraction(1, 5)
#: weight of the assessment half of an equivalence-decide grade
ASSESSMENT_WEIGHT = Fraction(1, 2)
#: default wall-clock budget for bounded equivalence checks, seconds
DEFAULT_BUDGET = 1.0


@dataclass(frozen=True)
class Feedback:
    severity: str
    text: str
    counterexample: Any = None
    location: Any = None

    def to_doc(self) -> dict:
        doc = {"severity": self.severity, "text": self.text}
        if self.counterexample is not None:
            doc["counterexample"] = (list(self.counterexample)
                                     if isinstance(self.counterexample, tuple)
                                     else self.counterexample)
        if self.location is not None:
            doc["location"] = list(self.location) if isinstance(self.location, tuple) \
                else self.location
        return doc


@dataclass(frozen=True)
class GradeReport:
    points: int
    max_points: int
    fraction: Fraction
    feedback: tuple[Feedback, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)
    not_counted: bool = False

    def __post_init__(self):
        if not 0 <= self.points <= self.max_points:
            raise ValueError("points out of range")

    def to_doc(self) -> dict:
        return {
            "points": self.points,
            "max_points": self.max_points,
            "fraction": f"{self.fraction.numerator}/{self.fraction.denominator}",
            "not_counted": self.not_counted,
            "feedback": [f.to_doc() for f in self.feedback],
            "metadata": dict(self.metadata),
        }


def round_half_up(x: Fraction) -> int:
    return int((2 * x.numerator + x.denominator) // (2 * x.denominator))


def _report(fraction: Fraction, max_points: int, feedback, metadata=None,
            not_counted=False) -> GradeReport:
    fraction = max(Fraction(0), min(Fraction(1), fraction))
    return GradeReport(points=round_half_up(fraction * max_points),
                       max_points=max_points, fraction=fraction,
                       feedback=tuple(feedback), metadata=metadata or {},
                       not_counted=not_counted)


def levenshtein(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


# ---------------------------------------------------------------------------
# word-list problems


def _word_checker(problem: Problem):
    """Membership oracle for a word-list problem; precomputes what it can."""
    kind = problem.kind
    if kind == documents.RE_WORDS:
        nfa = thompson(problem.payload["regex"], alphabet=problem.payload["alphabet"])
        return lambda w: nfa_accepts(nfa, w)
    if kind == documents.CFG_WORDS:
        from .grammar import cfg_accepts
        g: Cfg = problem.payload["grammar"]
        cnf = to_cnf(g)

        def check(w: str) -> bool:
            if any(c not in g.terminals for c in w):
                raise AlphabetError(f"symbol outside the grammar's terminals in {w!r}")
            return cfg_accepts(g, w, cnf=cnf)

        return check
    p: Pda = problem.payload["pda"]
    return lambda w: pda_accepts(p, w, step_cap_for(w)) == ACCEPTED


def grade_words(problem: Problem, attempt: dict) -> GradeReport:
    """Points per unique correct word; duplicates never count."""
    in_words, out_words = attempt["in_words"], attempt["out_words"]
    want_in, want_out = problem.payload["in_count"], problem.payload["out_count"]
    if len(in_words) != want_in or len(out_words) != want_out:
        raise InvalidAttempt(
            f"expected {want_in} words in and {want_out} words out, "
            f"got {len(in_words)} and {len(out_words)}")
    requested = want_in + want_out
    membership = _word_checker(problem)
    feedback: list[Feedback] = []
    correct = 0
    for words, should_accept, label in ((in_words, True, "in"),
                                        (out_words, False, "not in")):
        seen: set[str] = set()
        for w in words:
            if w in seen:
                feedback.append(Feedback(WARNING,
                                         f"{w!r} was given more than once; duplicates do not count",
                                         counterexample=w))
                continue
            seen.add(w)
            try:
                member = membership(w)
            except AlphabetError as exc:
                feedback.append(Feedback(ERROR, f"{w!r} uses symbols outside the alphabet "
                                                f"({exc})", counterexample=w))
                continue
            if member == should_accept:
                correct += 1
            else:
                actual = "is in the language" if member else "is not in the language"
                feedback.append(Feedback(ERROR,
                                         f"{w!r} was claimed to be {label} the language but it "
                                         f"{actual}", counterexample=w))
    fraction = Fraction(correct, requested)
    if fraction == 1:
        feedback.append(Feedback(INFO, f"all {requested} words are correct"))
    return _report(fraction, problem.max_points, feedback,
                   metadata={"correct_words": correct, "requested_words": requested})


# ---------------------------------------------------------------------------
# constructions


def grade_re_construction(problem: Problem, attempt_text: str) -> GradeReport:
    """Full points for the right language; otherwise edit distance to the
    teacher's REs, 20% off per necessary edit."""
    alphabet = problem.payload["alphabet"]
    solutions: tuple[Regex, ...] = problem.payload["solutions"]
    max_points = problem.max_points
    try:
        attempt = parse_regex(attempt_text, alphabet)
    except (ParseError, AlphabetError) as exc:
        return _report(Fraction(0), max_points,
                       [Feedback(ERROR, f"the expression does not parse: {exc}")])
    equiv = regular_equiv(attempt, solutions[0], alphabet=alphabet)
    if equiv.equal:
        return _report(Fraction(1), max_points,
                       [Feedback(INFO, "the expression recognizes the correct language")])
    printed_attempt = print_regex(attempt)
    distance = min(levenshtein(printed_attempt, print_regex(s)) for s in solutions)
    fraction = max(Fraction(0), 1 - EDIT_PENALTY * distance)
    cex = equiv.counterexample
    in_attempt, in_solution = equiv.membership
    feedback = [
        Feedback(ERROR,
                 f"the languages differ on {cex!r}: your expression "
                 f"{'accepts' if in_attempt else 'rejects'} it, the solution "
                 f"{'accepts' if in_solution else 'rejects'} it",
                 counterexample=cex),
        Feedback(INFO, f"{distance} edit(s) away from the closest provided solution"),
    ]
    return _report(fraction, max_points, feedback, metadata={"edit_distance": distance})


def _enumerate_side(obj, budget: float, max_len):
    if isinstance(obj, Cfg):
        return enumerate_words(obj, budget=budget, max_len=max_len)
    return pda_enumerate(obj, budget=budget, max_len=max_len)


def grade_bounded_construction(problem: Problem, attempt, budget: float = DEFAULT_BUDGET,
                               max_len: int | None = None,
                               solution=None) -> GradeReport:
    """Jaccard grade |A∩B| / |A∪B| over the word sets up to the completed length."""
    solution = solution if solution is not None else problem.payload["solution"]
    if not isinstance(attempt, (Cfg, Pda)):
        raise InvalidAttempt(f"expected a grammar or PDA attempt, got {type(attempt).__name__}")
    side_budget = max(budget / 2, 1e-9)
    sol_enum = _enumerate_side(solution, side_budget, max_len)
    att_enum = _enumerate_side(attempt, side_budget, max_len)
    completed = min(sol_enum.lengths_completed, att_enum.lengths_completed)
    if completed < 1:
        raise BudgetTooSmall(
            f"only words up to length {completed} were decided; regrade with a larger budget")
    a = {w for w in sol_enum.words if len(w) <= completed}
    b = {w for w in att_enum.words if len(w) <= completed}
    alphabet = solution.terminals if isinstance(solution, Cfg) else solution.input_alphabet
    words_tested = sum(len(alphabet) ** k for k in range(completed + 1))
    metadata = {"lengths_completed": completed, "words_tested": words_tested}
    if not a and not b:
        return _report(Fraction(1), problem.max_points,
                       [Feedback(WARNING,
                                 f"no words up to length {completed} separate the constructions; "
                                 f"low confidence, consider a longer check")],
                       metadata=metadata)
    fraction = Fraction(len(a & b), len(a | b))
    feedback: list[Feedback] = []
    by_size = lambda w: (len(w), w)
    for w in sorted(a - b, key=by_size)[:5]:
        feedback.append(Feedback(ERROR, f"{w!r} is in the language but your construction "
                                        f"rejects it", counterexample=w))
    for w in sorted(b - a, key=by_size)[:5]:
        feedback.append(Feedback(ERROR, f"your construction accepts {w!r}, which is not in "
                                        f"the language", counterexample=w))
    if fraction == 1:
        feedback.append(Feedback(INFO,
                                 f"passed all tests: {words_tested} words up to length "
                                 f"{completed} were checked"))
    return _report(fraction, problem.max_points, feedback, metadata=metadata)


def validate_block_label(goal: Regex, label: Regex) -> None:
    """ok iff label is a structural subexpression of the goal expression."""
    if label not in subexpressions(goal):
        raise NotASubexpression(
            f"{print_regex(label)!r} is not a subexpression of {print_regex(goal)!r}")


def grade_re_to_nfa(problem: Problem, attempt: BlockNfa) -> GradeReport:
    """Correct blocks over used blocks; the whole automaton is an implicit block."""
    goal: Regex = problem.payload["goal"]
    alphabet = problem.payload["alphabet"]
    for block in attempt.blocks:
        validate_block_label(goal, block.label)
    used = len(attempt.blocks) + 1
    correct = 0
    feedback: list[Feedback] = []
    for block in attempt.blocks:
        sub = attempt.block_automaton(block)
        equiv = regular_equiv(sub, block.label, alphabet=alphabet)
        if equiv.equal:
            correct += 1
        else:
            feedback.append(Feedback(
                ERROR,
                f"the block labeled {print_regex(block.label)!r} does not match its label: "
                f"the languages differ on {equiv.counterexample!r}",
                counterexample=equiv.counterexample,
                location=("block", print_regex(block.label))))
    whole = regular_equiv(attempt.nfa, goal, alphabet=alphabet)
    if whole.equal:
        correct += 1
    else:
        feedback.append(Feedback(
            ERROR,
            f"the automaton as a whole does not recognize the goal language: "
            f"it differs on {whole.counterexample!r}",
            counterexample=whole.counterexample, location=("block", "overall")))
    if not feedback:
        feedback.append(Feedback(INFO, f"all {used} block(s) are correct"))
    return _report(Fraction(correct, used), problem.max_points, feedback,
                   metadata={"used_blocks": used, "correct_blocks": correct})


# ---------------------------------------------------------------------------
# equivalence classes


def grade_equiv_decide(problem: Problem, attempt: dict) -> GradeReport:
    """Half the points for the verdict, half for the justification."""
    payload = problem.payload
    re, alphabet = payload["regex"], payload["alphabet"]
    w1, w2 = payload["w1"], payload["w2"]
    truth = regular_equiv(residual(re, w1, alphabet=alphabet),
                          residual(re, w2, alphabet=alphabet), alphabet=alphabet)
    says_equivalent = attempt["verdict"] == "equivalent"
    assessment_right = says_equivalent == truth.equal
    feedback: list[Feedback] = []
    fraction = Fraction(0)
    if not assessment_right:
        actual = "equivalent" if truth.equal else "not equivalent"
        feedback.append(Feedback(ERROR, f"{w1!r} and {w2!r} are {actual} with respect to "
                                        f"the language"))
        return _report(fraction, problem.max_points, feedback)
    fraction += ASSESSMENT_WEIGHT
    feedback.append(Feedback(INFO, "the assessment is correct"))
    if says_equivalent:
        suffix_re = parse_regex(attempt["justification"], alphabet)  # ParseError propagates
        check = regular_equiv(suffix_re, residual(re, w1, alphabet=alphabet),
                              alphabet=alphabet)
        if check.equal:
            fraction += 1 - ASSESSMENT_WEIGHT
            feedback.append(Feedback(INFO, "the suffix language is correct"))
        else:
            cex = check.counterexample
            in_given, in_true = check.membership
            feedback.append(Feedback(
                ERROR,
                f"the suffix language is wrong: {cex!r} is "
                f"{'in' if in_given else 'not in'} your language but "
                f"{'in' if in_true else 'not in'} the true suffix language",
                counterexample=cex))
    else:
        suffix = attempt["justification"]
        if any(c not in alphabet for c in suffix):
            feedback.append(Feedback(ERROR,
                                     f"the suffix {suffix!r} uses symbols outside the alphabet"))
        else:
            goal_nfa = thompson(re, alphabet=alphabet)
            first = nfa_accepts(goal_nfa, w1 + suffix)
            second = nfa_accepts(goal_nfa, w2 + suffix)
            if first != second:
                fraction += 1 - ASSESSMENT_WEIGHT
                feedback.append(Feedback(INFO, "the differentiating suffix is correct"))
            else:
                status = "in" if first else "not in"
                feedback.append(Feedback(
                    ERROR,
                    f"{suffix!r} does not differentiate: both {w1 + suffix!r} and "
                    f"{w2 + suffix!r} are {status} the language",
                    counterexample=suffix))
    return _report(fraction, problem.max_points, feedback)


def grade_equiv_find(problem: Problem, attempt: list[str]) -> GradeReport:
    """Like word grading; a word counts iff its residual equals the base word's."""
    payload = problem.payload
    re, alphabet = payload["regex"], payload["alphabet"]
    base, count = payload["base_word"], payload["count"]
    if len(attempt) != count:
        raise InvalidAttempt(f"expected {count} words, got {len(attempt)}")
    base_residual = residual(re, base, alphabet=alphabet)
    feedback: list[Feedback] = []
    seen: set[str] = set()
    correct = 0
    for w in attempt:
        if w in seen:
            feedback.append(Feedback(WARNING, f"{w!r} was given more than once; duplicates "
                                              f"do not count", counterexample=w))
            continue
        seen.add(w)
        if w == base:
            feedback.append(Feedback(WARNING, f"{w!r} is the given word itself and does not "
                                              f"count", counterexample=w))
            continue
        if any(c not in alphabet for c in w):
            feedback.append(Feedback(ERROR, f"{w!r} uses symbols outside the alphabet",
                                     counterexample=w))
            continue
        if regular_equiv(residual(re, w, alphabet=alphabet), base_residual,
                         alphabet=alphabet).equal:
            correct += 1
        else:
            feedback.append(Feedback(ERROR, f"{w!r} is not in the same equivalence class as "
                                            f"{base!r}", counterexample=w))
    if correct == count:
        feedback.append(Feedback(INFO, f"all {count} words are equivalent to {base!r}"))
    return _report(Fraction(correct, count), problem.max_points, feedback,
                   metadata={"correct_words": correct, "requested_words": count})


# ---------------------------------------------------------------------------
# games, derivations, tables


def game_payload(problem: Problem) -> dict:
    return {"lang": problem.payload["lang"], "regular": problem.payload["regular"],
            "template": problem.payload["template"]}


def replay_game(problem: Problem, moves: list[dict]) -> GameState:
    """Re-run a recorded move list; tutor answers are deterministic."""
    from .errors import IllegalMove
    from .pumping import pumping_game_step

    payload = game_payload(problem)
    state = GameState()
    try:
        for move in moves:
            state = pumping_game_step(payload, state, move)
    except IllegalMove as exc:
        raise InvalidAttempt(f"illegal move in recorded game: {exc.reason}") from exc
    return state


def grade_pumping_game(problem: Problem, final: GameState) -> GradeReport:
    """All points for a win, zero for a loss, transcript as feedback."""
    if final.winner is None:
        raise InvalidAttempt("the game has not finished")
    won = final.winner == "student"
    feedback = [Feedback(INFO if won else ERROR, line)
                for line in game_transcript(game_payload(problem), final)]
    return _report(Fraction(1 if won else 0), problem.max_points, feedback)


def grade_find_derivation(problem: Problem, attempt: Derivation) -> GradeReport:
    """Binary: the whole derivation must be correct."""
    payload = problem.payload
    verdict = check_derivation(payload["grammar"], attempt, payload["word"])
    if verdict.ok:
        return _report(Fraction(1), problem.max_points,
                       [Feedback(INFO, "the derivation is correct")])
    text = {
        "wrong-start": "the derivation must begin with the start symbol",
        "no-single-production": "this step does not follow from the previous one by "
                                "applying a single production",
        "wrong-result": f"the derivation does not end in the target word "
                        f"{payload['word']!r}",
        "wrong-occurrence": f"the replaced nonterminal is not the {payload['mode']} one",
    }[verdict.reason]
    feedback = [Feedback(ERROR, f"step {verdict.bad_step}: {text}",
                         location=("step", verdict.bad_step))]
    return _report(Fraction(0), problem.max_points, feedback,
                   metadata={"bad_step": verdict.bad_step, "reason": verdict.reason})


def grade_cnf(problem: Problem, attempt: Cfg, budget: float = DEFAULT_BUDGET,
              max_len: int | None = None) -> GradeReport:
    """Reject non-CNF attempts without consuming an attempt; otherwise grade
    bounded equivalence against the original grammar."""
    check = is_cnf(attempt)
    if not check.ok:
        feedback = [Feedback(ERROR, f"not in CNF: {v.message}",
                             location=("production", v.index))
                    for v in check.violations]
        feedback.append(Feedback(INFO, "the attempt was not graded and does not count"))
        return _report(Fraction(0), problem.max_points, feedback, not_counted=True)
    return grade_bounded_construction(problem, attempt, budget=budget, max_len=max_len,
                                      solution=problem.payload["grammar"])


def grade_cyk(problem: Problem, attempt: CykTable) -> GradeReport:
    """Row by row from the bottom; hints never name nonterminals."""
    g, word = problem.payload["grammar"], problem.payload["word"]
    truth = cyk_decide(g, word)
    n = len(word)
    consecutive = 0
    for length in range(1, n + 1):
        if attempt.row(length) == truth.row(length):
            consecutive += 1
        else:
            break
    feedback: list[Feedback] = []
    if consecutive < n:
        bad = consecutive + 1
        for i in range(n - bad + 1):
            got, want = attempt.cell(i, bad), truth.cell(i, bad)
            if got == want:
                continue
            problems = []
            if got - want:
                problems.append("contains nonterminals that do not belong there")
            if want - got:
                problems.append("is missing some nonterminal")
            feedback.append(Feedback(ERROR,
                                     f"in row {bad}, the cell for positions "
                                     f"{i + 1}..{i + bad} " + " and ".join(problems),
                                     location=("cell", i, bad)))
    else:
        feedback.append(Feedback(INFO, "the table is correct"))
    return _report(Fraction(consecutive, n), problem.max_points, feedback,
                   metadata={"correct_rows": consecutive, "rows": n})


def grade_while_to_tm(problem: Problem, attempt: MultiTapeTm,
                      budget: float = DEFAULT_BUDGET, step_cap: int = 1000,
                      max_component: int = 5,
                      max_tests: int | None = None) -> GradeReport:
    """Fraction of tested inputs on which the machine reproduces the program."""
    program: WhileProgram = problem.payload["program"]
    report = compare_io(program, attempt, budget=budget, step_cap=step_cap,
                        max_component=max_component, max_tests=max_tests)
    if report.tested == 0:
        report = compare_io(program, attempt, budget=budget, step_cap=step_cap,
                            max_component=max_component, max_tests=1)
    feedback = [Feedback(INFO, f"tested {report.tested} inputs, {report.correct} behaved "
                               f"as expected")]

    def show(outcome) -> str:
        if outcome == CUTOFF:
            return f"no output: more than {step_cap} steps"
        if outcome == INVALID_ENCODING:
            return "no output: a halted tape is not unary"
        return str(tuple(outcome))

    for cex in report.counterexamples:
        feedback.append(Feedback(
            ERROR,
            f"on input {tuple(cex.input)} the expected output is {show(cex.expected)} "
            f"but the machine computed {show(cex.computed)}",
            counterexample=tuple(cex.input)))
    return _report(Fraction(report.correct, report.tested), problem.max_points, feedback,
                   metadata={"tested": report.tested, "correct": report.correct})


# ---------------------------------------------------------------------------
# dispatch


def grade(problem: Problem, attempt, budget: float = DEFAULT_BUDGET,
          bounds: dict | None = None) -> GradeReport:
    """Grade a parsed attempt; `bounds` pins budget-dependent limits for regrades.

    Recognized bounds: max_len (bounded constructions, CNF), max_tests
    (While-to-TM).
    """
    bounds = bounds or {}
    kind = problem.kind
    if kind in (documents.RE_WORDS, documents.CFG_WORDS, documents.PDA_WORDS):
        return grade_words(problem, attempt)
    if kind == documents.RE_CONSTRUCTION:
        return grade_re_construction(problem, attempt)
    if kind in (documents.CFG_CONSTRUCTION, documents.PDA_CONSTRUCTION):
        return grade_bounded_construction(problem, attempt, budget=budget,
                                          max_len=bounds.get("max_len"))
    if kind == documents.RE_TO_NFA:
        return grade_re_to_nfa(problem, attempt)
    if kind == documents.EQUIV_DECIDE:
        return grade_equiv_decide(problem, attempt)
    if kind == documents.EQUIV_FIND:
        return grade_equiv_find(problem, attempt)
    if kind == documents.PUMPING_GAME:
        if isinstance(attempt, list):
            attempt = replay_game(problem, attempt)
        return grade_pumping_game(problem, attempt)
    if kind == documents.FIND_DERIVATION:
        return grade_find_derivation(problem, attempt)
    if kind == documents.CNF_TRANSFORM:
        return grade_cnf(problem, attempt, budget=budget, max_len=bounds.get("max_len"))
    if kind == documents.CYK:
        return grade_cyk(problem, attempt)
    if kind == documents.WHILE_TO_TM:
        return grade_while_to_tm(problem, attempt, budget=budget,
                                 max_tests=bounds.get("max_tests"))
    raise InvalidAttempt(f"no grader for kind {kind!r}")

from fractions import Fraction

import pytest

from formalgrade.documents import parse_attempt, problem_from_doc
from formalgrade.errors import (
    BudgetTooSmall,
    InvalidAttempt,
    InvalidProblem,
    NotASubexpression,
    ParseError,
)
from formalgrade.grading import (
    GradeReport,
    grade,
    grade_bounded_construction,
    grade_cnf,
    grade_cyk,
    grade_equiv_decide,
    grade_equiv_find,
    grade_find_derivation,
    grade_pumping_game,
    grade_re_construction,
    grade_re_to_nfa,
    grade_while_to_tm,
    grade_words,
    levenshtein,
    replay_game,
    round_half_up,
    validate_block_label,
)
from formalgrade.machines import tm_to_doc
from formalgrade.programs import base_program, build_tm
from formalgrade.regular import parse_regex

from .oracles import re_matches, words_over


def make_problem(kind, payload, max_points=10):
    problem, _ = problem_from_doc({"kind": kind, "max_points": max_points,
                                   "payload": payload})
    return problem


def graded(problem, attempt_doc, **kw):
    return grade(problem, parse_attempt(problem, attempt_doc), **kw)


# ---------------------------------------------------------------------------
# rounding


def test_round_half_up():
    assert round_half_up(Fraction(1, 2)) == 1
    assert round_half_up(Fraction(3, 2)) == 2
    assert round_half_up(Fraction(2, 3) * 10) == 7
    assert round_half_up(Fraction(0)) == 0


def test_levenshtein_classic():
    assert levenshtein("kitten", "sitting") == 3
    assert levenshtein("", "abc") == 3
    assert levenshtein("same", "same") == 0


# ---------------------------------------------------------------------------
# word problems


RE_WORDS_PROBLEM = {"alphabet": ["a", "b"], "regex": "a*b", "in_count": 2, "out_count": 1}


def test_words_full_score():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    report = graded(problem, {"in_words": ["b", "ab"], "out_words": ["a"]})
    assert report.points == 10 and report.fraction == 1


def test_words_duplicates_do_not_count():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    report = graded(problem, {"in_words": ["b", "b"], "out_words": ["a"]})
    assert report.fraction == Fraction(2, 3)
    assert report.points == 7
    assert any("more than once" in f.text for f in report.feedback)


def test_words_incorrect_words_named():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    report = graded(problem, {"in_words": ["a", "b"], "out_words": ["ab"]})
    assert report.fraction == Fraction(1, 3)
    texts = " | ".join(f.text for f in report.feedback)
    assert "'a'" in texts and "'ab'" in texts


def test_words_alphabet_error_becomes_feedback():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    report = graded(problem, {"in_words": ["b", "cb"], "out_words": ["a"]})
    assert report.fraction == Fraction(2, 3)
    assert any("outside the alphabet" in f.text for f in report.feedback)


def test_words_count_mismatch_rejected():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    with pytest.raises(InvalidAttempt):
        graded(problem, {"in_words": ["b"], "out_words": ["a"]})


def test_words_permutation_invariant():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    a = graded(problem, {"in_words": ["b", "ab"], "out_words": ["a"]})
    b = graded(problem, {"in_words": ["ab", "b"], "out_words": ["a"]})
    assert a.points == b.points and a.fraction == b.fraction


def test_cfg_words_membership():
    problem = make_problem("CfgWords", {"grammar": "S -> aSb | eps",
                                        "in_count": 2, "out_count": 1})
    report = graded(problem, {"in_words": ["", "aabb"], "out_words": ["ba"]})
    assert report.fraction == 1


def test_pda_words_membership():
    from .test_pda import balanced_pda
    from formalgrade.pda import pda_to_doc
    problem = make_problem("PdaWords", {"pda": pda_to_doc(balanced_pda()),
                                        "in_count": 1, "out_count": 1})
    report = graded(problem, {"in_words": ["abab"], "out_words": ["aab"]})
    assert report.fraction == 1


# ---------------------------------------------------------------------------
# RE construction


def re_construction(solutions, max_points=10):
    return make_problem("ReConstruction",
                        {"alphabet": ["a", "b"], "solutions": solutions,
                         "description": "words of a* followed by one b"},
                        max_points=max_points)


def test_re_construction_equivalent_full_points():
    # oracle: both match exactly the same words up to length 8
    x, y = parse_regex("a*b"), parse_regex("aa*b|b")
    assert all(re_matches(x, w) == re_matches(y, w) for w in words_over("ab", 8))
    report = grade_re_construction(re_construction(["a*b"]), "aa*b|b")
    assert report.points == 10 and report.fraction == 1


def test_re_construction_levenshtein_deduction():
    problem = make_problem("ReConstruction",
                           {"alphabet": ["a", "b"], "solutions": ["(a|b)*abb"]})
    report = grade_re_construction(problem, "(a|b)*ab")
    assert report.metadata["edit_distance"] == 1
    assert report.fraction == Fraction(4, 5)
    assert report.points == 8
    assert any(f.counterexample is not None for f in report.feedback)


def test_re_construction_distance_five_is_zero():
    report = grade_re_construction(re_construction(["a*b"]), "bbbbbbbbbb")
    assert report.metadata["edit_distance"] >= 5
    assert report.points == 0


def test_re_construction_counterexample_validates():
    problem = re_construction(["a*b"])
    report = grade_re_construction(problem, "a*")
    cex = next(f.counterexample for f in report.feedback if f.counterexample is not None)
    assert re_matches(parse_regex("a*"), cex) != re_matches(parse_regex("a*b"), cex)


def test_re_construction_parse_error_zero_points():
    report = grade_re_construction(re_construction(["a*b"]), "a**)")
    assert report.points == 0
    assert any("does not parse" in f.text for f in report.feedback)


def test_re_construction_closest_of_several_solutions():
    problem = re_construction(["a*b", "b|aa*b"])
    report = grade_re_construction(problem, "b|aa*a")  # 1 edit from the second
    assert report.metadata["edit_distance"] == 1


def test_nonequivalent_extra_solution_warns_at_create_time():
    _, warnings = problem_from_doc({
        "kind": "ReConstruction", "max_points": 5,
        "payload": {"alphabet": ["a", "b"], "solutions": ["a*b", "a*"]}})
    assert warnings and "not equivalent" in warnings[0]


# ---------------------------------------------------------------------------
# bounded construction (Jaccard)


def test_bounded_identical_full_score():
    problem = make_problem("CfgConstruction", {"solution": "S -> aSb | eps"})
    attempt = parse_attempt(problem, {"grammar": "S -> aSb | eps"})
    report = grade_bounded_construction(problem, attempt, budget=4.0, max_len=6)
    assert report.fraction == 1
    passed = next(f for f in report.feedback if f.severity == "info")
    assert "passed" in passed.text and "127" in passed.text
    assert "equivalent" not in " ".join(f.text for f in report.feedback)


def test_bounded_jaccard_three_quarters():
    problem = make_problem("CfgConstruction", {"solution": "S -> aSb | eps"}, max_points=8)
    attempt = parse_attempt(problem, {"grammar": "S -> aSb | ab"})
    report = grade_bounded_construction(problem, attempt, budget=4.0, max_len=6)
    # oracle: A = {ε, ab, aabb, aaabbb}, B drops ε
    assert report.fraction == Fraction(3, 4)
    assert report.points == 6
    missing = [f for f in report.feedback if f.counterexample == ""]
    assert missing and "rejects" in missing[0].text


def test_bounded_disjoint_zero():
    problem = make_problem("CfgConstruction", {"solution": "S -> a"})
    attempt = parse_attempt(problem, {"grammar": "S -> b"})
    report = grade_bounded_construction(problem, attempt, budget=4.0, max_len=4)
    assert report.fraction == 0


def test_bounded_counterexamples_revalidate():
    from formalgrade.grammar import cfg_accepts, parse_cfg
    problem = make_problem("CfgConstruction", {"solution": "S -> aSb | eps"})
    attempt = parse_attempt(problem, {"grammar": "S -> aSb | ab"})
    report = grade_bounded_construction(problem, attempt, budget=4.0, max_len=6)
    sol, att = parse_cfg("S -> aSb | eps"), parse_cfg("S -> aSb | ab")
    for f in report.feedback:
        if f.counterexample is not None:
            assert cfg_accepts(sol, f.counterexample) != cfg_accepts(att, f.counterexample)


def test_bounded_budget_too_small():
    problem = make_problem("CfgConstruction", {"solution": "S -> aSb | eps"})
    attempt = parse_attempt(problem, {"grammar": "S -> aSb | eps"})
    with pytest.raises(BudgetTooSmall):
        grade_bounded_construction(problem, attempt, budget=0.0)


def test_bounded_pda_attempt():
    from .test_pda import balanced_pda, cfg_to_pda
    from formalgrade.pda import pda_to_doc
    problem = make_problem("PdaConstruction", {"solution": pda_to_doc(balanced_pda())})
    attempt = parse_attempt(problem, {"pda": pda_to_doc(balanced_pda())})
    report = grade_bounded_construction(problem, attempt, budget=8.0, max_len=6)
    assert report.fraction == 1


# ---------------------------------------------------------------------------
# RE to NFA with blocks


def star_ab_attempt(block2_label):
    # Thompson-style automaton for (a|b)* with an inner union block and a
    # sub-block around the a-edge, whose label the caller controls
    return {
        "states": list(range(8)),
        "initial": 0,
        "accepting": [1],
        "transitions": [
            {"from": 0, "read": "eps", "to": 1},
            {"from": 0, "read": "eps", "to": 2},
            {"from": 2, "read": "eps", "to": 4},
            {"from": 2, "read": "eps", "to": 6},
            {"from": 4, "read": "a", "to": 5},
            {"from": 6, "read": "b", "to": 7},
            {"from": 5, "read": "eps", "to": 3},
            {"from": 7, "read": "eps", "to": 3},
            {"from": 3, "read": "eps", "to": 1},
            {"from": 3, "read": "eps", "to": 2},
        ],
        "blocks": [
            {"label": "a|b", "entry": 2, "exit": 3, "inner": [4, 5, 6, 7]},
            {"label": block2_label, "entry": 4, "exit": 5, "inner": []},
        ],
    }


def test_re_to_nfa_binary_full():
    problem = make_problem("ReToNfa", {"alphabet": ["a", "b"], "goal": "(a|b)*"})
    doc = star_ab_attempt("a")
    doc["blocks"] = []
    report = grade_re_to_nfa(problem, parse_attempt(problem, {"automaton": doc}))
    assert report.fraction == 1 and report.metadata["used_blocks"] == 1


def test_re_to_nfa_binary_zero():
    problem = make_problem("ReToNfa", {"alphabet": ["a", "b"], "goal": "(a|b)*"})
    doc = {"states": [0, 1], "initial": 0, "accepting": [1],
           "transitions": [{"from": 0, "read": "a", "to": 1}], "blocks": []}
    report = grade_re_to_nfa(problem, parse_attempt(problem, {"automaton": doc}))
    assert report.fraction == 0


def test_re_to_nfa_two_of_three_blocks():
    problem = make_problem("ReToNfa", {"alphabet": ["a", "b"], "goal": "(a|b)*"})
    attempt = parse_attempt(problem, {"automaton": star_ab_attempt("b")})
    report = grade_re_to_nfa(problem, attempt)
    assert report.metadata == {"used_blocks": 3, "correct_blocks": 2}
    assert report.fraction == Fraction(2, 3)
    bad = [f for f in report.feedback if f.severity == "error"]
    assert len(bad) == 1 and "'b'" in bad[0].text


def test_re_to_nfa_all_blocks_correct():
    problem = make_problem("ReToNfa", {"alphabet": ["a", "b"], "goal": "(a|b)*"})
    attempt = parse_attempt(problem, {"automaton": star_ab_attempt("a")})
    report = grade_re_to_nfa(problem, attempt)
    assert report.fraction == 1


def test_re_to_nfa_invalid_label_rejected():
    problem = make_problem("ReToNfa", {"alphabet": ["a", "b"], "goal": "(a|b)*abb"})
    goal = problem.payload["goal"]
    validate_block_label(goal, parse_regex("a|b"))
    validate_block_label(goal, parse_regex("(a|b)*"))
    with pytest.raises(NotASubexpression):
        validate_block_label(goal, parse_regex("ba"))


# ---------------------------------------------------------------------------
# equivalence classes


def equiv_decide_problem():
    return make_problem("EquivClassesDecide",
                        {"alphabet": ["a", "b"], "regex": "a*b", "w1": "a", "w2": "aa"})


def test_equiv_decide_full():
    report = grade_equiv_decide(equiv_decide_problem(),
                                {"verdict": "equivalent", "justification": "a*b"})
    assert report.fraction == 1


def test_equiv_decide_different_with_suffix():
    problem = make_problem("EquivClassesDecide",
                           {"alphabet": ["a", "b"], "regex": "a*b", "w1": "b", "w2": "a"})
    report = grade_equiv_decide(problem, {"verdict": "different", "justification": ""})
    assert report.fraction == 1


def test_equiv_decide_right_verdict_wrong_justification():
    report = grade_equiv_decide(equiv_decide_problem(),
                                {"verdict": "equivalent", "justification": "b"})
    assert report.fraction == Fraction(1, 2)
    assert any(f.counterexample is not None for f in report.feedback)


def test_equiv_decide_wrong_verdict_zero():
    report = grade_equiv_decide(equiv_decide_problem(),
                                {"verdict": "different", "justification": "b"})
    assert report.fraction == 0


def test_equiv_decide_nondifferentiating_suffix_reports_membership():
    # "ba" differentiates nothing here: both "bba" and "aba" are outside a*b
    problem = make_problem("EquivClassesDecide",
                           {"alphabet": ["a", "b"], "regex": "a*b", "w1": "b", "w2": "a"})
    report = grade_equiv_decide(problem, {"verdict": "different", "justification": "ba"})
    assert report.fraction == Fraction(1, 2)
    bad = next(f for f in report.feedback if f.severity == "error")
    assert "both" in bad.text and "not in" in bad.text


def test_equiv_decide_justification_parse_error_propagates():
    with pytest.raises(ParseError):
        grade_equiv_decide(equiv_decide_problem(),
                           {"verdict": "equivalent", "justification": "(("})


def test_equiv_find_full():
    problem = make_problem("EquivClassesFind",
                           {"alphabet": ["a", "b"], "regex": "a*b",
                            "base_word": "a", "count": 2})
    report = grade_equiv_find(problem, ["aa", "aaa"])
    assert report.fraction == 1


def test_equiv_find_base_word_does_not_count():
    problem = make_problem("EquivClassesFind",
                           {"alphabet": ["a", "b"], "regex": "a*b",
                            "base_word": "a", "count": 2})
    report = grade_equiv_find(problem, ["a", "aa"])
    assert report.fraction == Fraction(1, 2)


def test_equiv_find_wrong_class_zero():
    problem = make_problem("EquivClassesFind",
                           {"alphabet": ["a", "b"], "regex": "a*b",
                            "base_word": "a", "count": 1})
    report = grade_equiv_find(problem, ["b"])
    assert report.fraction == 0


# ---------------------------------------------------------------------------
# pumping game grading


def pumping_problem():
    return make_problem("PumpingGame", {
        "language": {"alphabet": ["a", "b"],
                     "blocks": [{"symbol": "a", "exponent": "i"},
                                {"symbol": "b", "exponent": "j"}],
                     "constraints": ["i < j"]},
        "regular": False,
        "unpumpable": [{"symbol": "a", "exponent": "n"},
                       {"symbol": "b", "exponent": "n+1"}],
    })


def test_pumping_game_loss_zero_with_transcript():
    problem = pumping_problem()
    final = replay_game(problem, [
        {"kind": "claim", "claim": "regular"},
        {"kind": "n", "n": 3},
        {"kind": "split", "x": "", "y": "a", "z": "aabbbb"},
    ])
    assert final.winner == "tutor"
    report = grade_pumping_game(problem, final)
    assert report.points == 0
    text = " | ".join(f.text for f in report.feedback)
    assert "i = " in text and "not in the language" in text


def test_pumping_game_win_full():
    problem = pumping_problem()
    moves = [{"kind": "claim", "claim": "nonregular"}]
    state = replay_game(problem, moves)
    w = "a" * state.n + "b" * (state.n + 1)
    moves.append({"kind": "word", "word": w})
    state = replay_game(problem, moves)
    x, y, z = state.split
    from formalgrade.pumping import arith_member
    lang = problem.payload["lang"]
    breaking = next(i for i in range(state.n + 3)
                    if not arith_member(lang, x + y * i + z))
    moves.append({"kind": "i", "i": breaking})
    report = graded(problem, {"moves": moves})
    assert report.points == 10


def test_pumping_game_unfinished_rejected():
    problem = pumping_problem()
    with pytest.raises(InvalidAttempt):
        graded(problem, {"moves": [{"kind": "claim", "claim": "regular"}]})


def test_pumping_template_validated_at_create_time():
    with pytest.raises(InvalidProblem):
        make_problem("PumpingGame", {
            "language": {"alphabet": ["a", "b"],
                         "blocks": [{"symbol": "a", "exponent": "i"},
                                    {"symbol": "b", "exponent": "j"}],
                         "constraints": ["i < j"]},
            "regular": False,
            "unpumpable": [{"symbol": "a", "exponent": "n"},
                           {"symbol": "b", "exponent": "n"}],  # not in the language
        })


# ---------------------------------------------------------------------------
# derivations


def derivation_problem(mode="any"):
    return make_problem("FindDerivation",
                        {"grammar": "S -> aSb | eps", "word": "ab", "mode": mode})


def test_derivation_full():
    report = graded(derivation_problem(), {"steps": ["S", "aSb", "ab"]})
    assert report.fraction == 1


def test_derivation_wrong_occurrence_hint():
    problem = make_problem("FindDerivation",
                           {"grammar": "S -> AB\nA -> a\nB -> b", "word": "ab",
                            "mode": "leftmost"})
    report = graded(problem, {"steps": ["S", "AB", "Ab", "ab"]})
    assert report.points == 0
    assert "leftmost" in report.feedback[0].text


def test_derivation_wrong_result():
    report = graded(derivation_problem(), {"steps": ["S", "aSb", "aabb"]})
    assert report.points == 0
    assert report.metadata["reason"] == "no-single-production"


# ---------------------------------------------------------------------------
# CNF transform


ANBN_CNF = "Z -> eps | AT | AB\nT -> SB\nS -> AT | AB\nA -> a\nB -> b"


def test_cnf_shape_violation_not_counted():
    problem = make_problem("CnfTransform", {"grammar": "S -> aSb | eps"})
    attempt = parse_attempt(problem, {"grammar": "S -> aB | eps\nB -> b"})
    report = grade_cnf(problem, attempt, budget=4.0, max_len=5)
    assert report.points == 0
    assert report.not_counted is True
    assert any("not in CNF" in f.text for f in report.feedback)


def test_cnf_correct_transformation_full():
    problem = make_problem("CnfTransform", {"grammar": "S -> aSb | eps"})
    attempt = parse_attempt(problem, {"grammar": ANBN_CNF})
    report = grade_cnf(problem, attempt, budget=4.0, max_len=6)
    assert report.fraction == 1
    assert report.not_counted is False
    texts = " ".join(f.text for f in report.feedback)
    assert "passed" in texts and "equivalent" not in texts


def test_cnf_missing_epsilon_counterexample():
    problem = make_problem("CnfTransform", {"grammar": "S -> aSb | eps"})
    attempt = parse_attempt(problem, {"grammar": "S -> AT | AB\nT -> SB\nA -> a\nB -> b"})
    report = grade_cnf(problem, attempt, budget=4.0, max_len=6)
    assert report.not_counted is False
    assert report.fraction == Fraction(3, 4)
    assert any(f.counterexample == "" for f in report.feedback)


# ---------------------------------------------------------------------------
# CYK


def cyk_problem(word="ab", max_points=10):
    return make_problem("Cyk", {"grammar": "S -> AB\nA -> a\nB -> b", "word": word},
                        max_points=max_points)


def test_cyk_fully_correct():
    report = graded(cyk_problem(), {"rows": [[["A"], ["B"]], [["S"]]]})
    assert report.fraction == 1


def test_cyk_extra_nonterminal_half_credit():
    report = graded(cyk_problem(), {"rows": [[["A"], ["B"]], [["S", "A"]]]})
    assert report.fraction == Fraction(1, 2)
    bad = next(f for f in report.feedback if f.severity == "error")
    assert "do not belong" in bad.text
    assert bad.location == ("cell", 0, 2)
    # the hint must not name the offending nonterminal
    assert "A" not in bad.text and "S" not in bad.text


def test_cyk_bottom_row_wrong_zero():
    report = graded(cyk_problem(), {"rows": [[["B"], ["B"]], [["S"]]]})
    assert report.fraction == 0


def test_cyk_missing_nonterminal_hint():
    report = graded(cyk_problem(), {"rows": [[["A"], ["B"]], [[]]]})
    bad = next(f for f in report.feedback if f.severity == "error")
    assert "missing some nonterminal" in bad.text


def test_cyk_longer_word_row_fractions():
    problem = make_problem(
        "Cyk", {"grammar": "S -> AB | SB\nA -> a\nB -> b", "word": "abb"}, max_points=9)
    from formalgrade.grammar import cyk_decide
    truth = cyk_decide(problem.payload["grammar"], "abb")
    rows = [[sorted(truth.cell(i, length)) for i in range(3 - length + 1)]
            for length in range(1, 4)]
    assert graded(problem, {"rows": rows}).fraction == 1
    rows[2] = [[]]  # break the top row only
    report = graded(problem, {"rows": rows})
    assert report.fraction == Fraction(2, 3)
    assert report.points == 6


def test_cyk_malformed_table_rejected():
    with pytest.raises(InvalidAttempt):
        graded(cyk_problem(), {"rows": [[["A"]], [["S"]]]})
    with pytest.raises(InvalidAttempt):
        graded(cyk_problem(), {"rows": [[["A"], ["Q"]], [["S"]]]})


# ---------------------------------------------------------------------------
# While to TM


def while_problem(name="copy", max_points=10):
    bp = base_program(name)
    return make_problem("WhileToTm", {"program": bp.source}, max_points=max_points), bp


def test_while_correct_machine_full():
    problem, bp = while_problem("copy")
    report = grade_while_to_tm(problem, bp.reference_tm, budget=20.0, max_component=3)
    assert report.fraction == 1
    assert all(f.severity != "error" for f in report.feedback)
    assert "equivalent" not in " ".join(f.text for f in report.feedback)


def test_while_eraser_machine_fraction():
    # machine that zeroes both tapes is right exactly when x1 = 0 (6 of 36 inputs)
    problem, _ = while_problem("copy")
    eraser = build_tm(2, [
        ("w0", "1*", "w0", "_=", "RS"),
        ("w0", "_*", "w1", "==", "SS"),
        ("w1", "*1", "w1", "=_", "SR"),
        ("w1", "*_", "done", "==", "SS"),
    ], initial="w0")
    report = grade_while_to_tm(problem, eraser, budget=20.0, max_component=5)
    assert report.metadata["tested"] == 36
    assert report.fraction == Fraction(6, 36)


def test_while_nonhalting_machine_zero_with_cutoff_feedback():
    problem, _ = while_problem("increment")
    spinner = build_tm(1, [("s", "*", "s", "=", "R")], initial="s")
    report = grade_while_to_tm(problem, spinner, budget=20.0, max_component=3)
    assert report.fraction == 0
    assert any("more than 1000 steps" in f.text for f in report.feedback)


def test_while_counterexamples_carry_both_outputs():
    problem, _ = while_problem("increment")
    identity = build_tm(1, [], initial="done")
    report = grade_while_to_tm(problem, identity, budget=20.0, max_component=3)
    bad = [f for f in report.feedback if f.severity == "error"]
    assert bad and "expected output is (1,)" in bad[0].text and "computed (0,)" in bad[0].text


def test_while_regrade_with_max_tests_is_deterministic():
    problem, bp = while_problem("add")
    first = grade_while_to_tm(problem, bp.reference_tm, budget=20.0, max_component=3)
    again = grade_while_to_tm(problem, bp.reference_tm, budget=0.0,
                              max_tests=first.metadata["tested"], max_component=3)
    assert first == again


# ---------------------------------------------------------------------------
# report shape


def test_report_doc_shape():
    problem = make_problem("ReWords", RE_WORDS_PROBLEM)
    doc = graded(problem, {"in_words": ["b", "b"], "out_words": ["a"]}).to_doc()
    assert doc["fraction"] == "2/3"
    assert doc["points"] == 7 and doc["max_points"] == 10
    assert doc["not_counted"] is False
    assert all({"severity", "text"} <= set(f) for f in doc["feedback"])


def test_points_never_exceed_max():
    with pytest.raises(ValueError):
        GradeReport(points=11, max_points=10, fraction=Fraction(1))

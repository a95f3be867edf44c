"""Walk through the graders on small fixtures and print their feedback."""

from formalgrade.documents import parse_attempt, problem_from_doc
from formalgrade.grading import grade
from formalgrade.machines import tm_to_doc
from formalgrade.programs import base_program


def show(title, problem_doc, attempt_doc, budget=2.0):
    problem, warnings = problem_from_doc(problem_doc)
    for w in warnings:
        print(f"  (teacher warning: {w})")
    report = grade(problem, parse_attempt(problem, attempt_doc), budget=budget)
    frac = report.fraction
    print(f"\n== {title}")
    print(f"   {report.points}/{report.max_points} points "
          f"({frac.numerator}/{frac.denominator})")
    for f in report.feedback:
        print(f"   [{f.severity}] {f.text}")


show(
    "words in and out of L(a*b)",
    {"kind": "ReWords", "max_points": 6,
     "payload": {"alphabet": ["a", "b"], "regex": "a*b", "in_count": 2, "out_count": 1}},
    {"in_words": ["b", "b"], "out_words": ["ab"]},
)

show(
    "regex construction, one edit off",
    {"kind": "ReConstruction", "max_points": 10,
     "payload": {"alphabet": ["a", "b"], "solutions": ["(a|b)*abb"],
                 "description": "all words ending in abb"}},
    {"regex": "(a|b)*ab"},
)

show(
    "grammar construction, missing the empty word",
    {"kind": "CfgConstruction", "max_points": 8,
     "payload": {"solution": "S -> aSb | eps", "description": "a^n b^n"}},
    {"grammar": "S -> aSb | ab"},
)

show(
    "CYK table with one careless cell",
    {"kind": "Cyk", "max_points": 10,
     "payload": {"grammar": "S -> AB | SB\nA -> a\nB -> b", "word": "abb"}},
    {"rows": [[["A"], ["B"], ["B"]], [["S"], []], [[]]]},
)

show(
    "Turing machine for x0 := x1",
    {"kind": "WhileToTm", "max_points": 10, "payload": {"program": "x0 := x1 + 0"}},
    {"tm": tm_to_doc(base_program("copy").reference_tm)},
)

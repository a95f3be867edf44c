"""Regenerate the bundled editor fixtures from the grading engine.

Run from the repository root: python3 frontend/fixtures/generate.py
Each fixture pairs a problem document with a full-score attempt document, so
the frontend tests can both round-trip the editors and submit successfully.
"""

import json
from pathlib import Path

from formalgrade.machines import tm_to_doc
from formalgrade.pda import Pda, PdaTransition, pda_to_doc
from formalgrade.programs import base_program

HERE = Path(__file__).parent


def balanced_pda_doc():
    q = "q"
    return pda_to_doc(Pda(
        states=frozenset({q}),
        input_alphabet=frozenset("ab"),
        stack_alphabet=frozenset("ZX"),
        initial=q,
        initial_stack="Z",
        acceptance="empty",
        accepting=frozenset(),
        transitions=(
            PdaTransition(q, "a", "Z", q, ("X", "Z")),
            PdaTransition(q, "a", "X", q, ("X", "X")),
            PdaTransition(q, "b", "X", q, ()),
            PdaTransition(q, None, "Z", q, ()),
        ),
    ))


def star_ab_block_nfa():
    return {
        "states": [str(i) for i in range(8)],
        "alphabet": ["a", "b"],
        "initial": "0",
        "accepting": ["1"],
        "transitions": [
            {"from": "0", "read": "eps", "to": "1"},
            {"from": "0", "read": "eps", "to": "2"},
            {"from": "2", "read": "eps", "to": "4"},
            {"from": "2", "read": "eps", "to": "6"},
            {"from": "4", "read": "a", "to": "5"},
            {"from": "6", "read": "b", "to": "7"},
            {"from": "5", "read": "eps", "to": "3"},
            {"from": "7", "read": "eps", "to": "3"},
            {"from": "3", "read": "eps", "to": "1"},
            {"from": "3", "read": "eps", "to": "2"},
        ],
        "blocks": [
            {"label": "a|b", "entry": "2", "exit": "3", "inner": ["4", "5", "6", "7"]},
        ],
    }


ANBN_CNF = "Z -> eps | AT | AB\nT -> SB\nS -> AT | AB\nA -> a\nB -> b"

FIXTURES = [
    {
        "name": "re-words",
        "problem": {"kind": "ReWords", "max_points": 6,
                    "payload": {"alphabet": ["a", "b"], "regex": "a*b",
                                "in_count": 2, "out_count": 1}},
        "attempt": {"in_words": ["b", "ab"], "out_words": ["a"]},
    },
    {
        "name": "cfg-words",
        "problem": {"kind": "CfgWords", "max_points": 4,
                    "payload": {"grammar": "S -> aSb | eps",
                                "in_count": 1, "out_count": 1}},
        "attempt": {"in_words": ["ab"], "out_words": ["ba"]},
    },
    {
        "name": "pda-words",
        "problem": {"kind": "PdaWords", "max_points": 4,
                    "payload": {"pda": balanced_pda_doc(),
                                "in_count": 1, "out_count": 1}},
        "attempt": {"in_words": ["abab"], "out_words": ["aab"]},
    },
    {
        "name": "re-construction",
        "problem": {"kind": "ReConstruction", "max_points": 10,
                    "payload": {"alphabet": ["a", "b"], "solutions": ["a*b"],
                                "description": "any number of a's, then one b"}},
        "attempt": {"regex": "aa*b|b"},
    },
    {
        "name": "cfg-construction",
        "problem": {"kind": "CfgConstruction", "max_points": 8,
                    "payload": {"solution": "S -> aSb | eps",
                                "description": "a^n b^n"}},
        "attempt": {"grammar": "S -> aSb | eps"},
    },
    {
        "name": "pda-construction",
        "problem": {"kind": "PdaConstruction", "max_points": 8,
                    "payload": {"solution": balanced_pda_doc(),
                                "description": "balanced a-push b-pop words"}},
        "attempt": {"pda": balanced_pda_doc()},
    },
    {
        "name": "re-to-nfa",
        "problem": {"kind": "ReToNfa", "max_points": 9,
                    "payload": {"alphabet": ["a", "b"], "goal": "(a|b)*"}},
        "attempt": {"automaton": star_ab_block_nfa()},
    },
    {
        "name": "equiv-decide",
        "problem": {"kind": "EquivClassesDecide", "max_points": 10,
                    "payload": {"alphabet": ["a", "b"], "regex": "a*b",
                                "w1": "a", "w2": "aa"}},
        "attempt": {"verdict": "equivalent", "justification": "a*b"},
    },
    {
        "name": "equiv-find",
        "problem": {"kind": "EquivClassesFind", "max_points": 6,
                    "payload": {"alphabet": ["a", "b"], "regex": "a*b",
                                "base_word": "a", "count": 2}},
        "attempt": {"words": ["aa", "aaa"]},
    },
    {
        "name": "pumping-game",
        "problem": {"kind": "PumpingGame", "max_points": 10, "payload": {
            "language": {"alphabet": ["a", "b"],
                         "blocks": [{"symbol": "a", "exponent": "i"},
                                    {"symbol": "b", "exponent": "j"}],
                         "constraints": ["i < j"]},
            "regular": False,
            "unpumpable": [{"symbol": "a", "exponent": "n"},
                           {"symbol": "b", "exponent": "n+1"}],
            "description": "words a^i b^j with i < j"}},
        "attempt": None,  # played move by move through the game panel
    },
    {
        "name": "find-derivation",
        "problem": {"kind": "FindDerivation", "max_points": 5,
                    "payload": {"grammar": "S -> aSb | eps", "word": "ab",
                                "mode": "any"}},
        "attempt": {"steps": ["S", "aSb", "ab"]},
    },
    {
        "name": "cnf-transform",
        "problem": {"kind": "CnfTransform", "max_points": 10,
                    "payload": {"grammar": "S -> aSb | eps"}},
        "attempt": {"grammar": ANBN_CNF},
    },
    {
        "name": "cyk",
        "problem": {"kind": "Cyk", "max_points": 10,
                    "payload": {"grammar": "S -> AB\nA -> a\nB -> b", "word": "ab"}},
        "attempt": {"rows": [[["A"], ["B"]], [["S"]]]},
    },
    {
        "name": "while-to-tm",
        "problem": {"kind": "WhileToTm", "max_points": 10,
                    "payload": {"program": "x0 := x1 + 0", "var_count": 2}},
        "attempt": {"tm": tm_to_doc(base_program("copy").reference_tm)},
    },
]


def main():
    # fail fast if any fixture no longer validates or grades below full score
    from formalgrade.documents import parse_attempt, problem_from_doc
    from formalgrade.grading import grade

    for fixture in FIXTURES:
        problem, _ = problem_from_doc(fixture["problem"])
        if fixture["attempt"] is not None:
            report = grade(problem, parse_attempt(problem, fixture["attempt"]),
                           budget=4.0)
            assert report.fraction == 1, (fixture["name"], report)
    out = HERE / "fixtures.json"
    out.write_text(json.dumps(FIXTURES, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} ({len(FIXTURES)} fixtures)")


if __name__ == "__main__":
    main()

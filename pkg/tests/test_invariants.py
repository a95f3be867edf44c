"""Cross-cutting invariants: grader purity and CLI/service report parity."""

import copy
import json

from formalgrade.auth import issue_token
from formalgrade.cli import main
from formalgrade.documents import parse_attempt, problem_from_doc
from formalgrade.grading import grade
from formalgrade.service import ExerciseService
from formalgrade.store import Store

CASES = [
    ({"kind": "ReWords", "max_points": 6,
      "payload": {"alphabet": ["a", "b"], "regex": "a*b",
                  "in_count": 1, "out_count": 1}},
     {"in_words": ["b"], "out_words": ["ab"]}),
    ({"kind": "ReConstruction", "max_points": 10,
      "payload": {"alphabet": ["a", "b"], "solutions": ["(a|b)*abb"]}},
     {"regex": "(a|b)*ab"}),
    ({"kind": "Cyk", "max_points": 10,
      "payload": {"grammar": "S -> AB\nA -> a\nB -> b", "word": "ab"}},
     {"rows": [[["A"], ["B"]], [["S", "A"]]]}),
    ({"kind": "FindDerivation", "max_points": 5,
      "payload": {"grammar": "S -> aSb | eps", "word": "ab", "mode": "leftmost"}},
     {"steps": ["S", "aSb", "ab"]}),
]


def test_graders_do_not_mutate_problem_payloads():
    for problem_doc, attempt_doc in CASES:
        problem, _ = problem_from_doc(problem_doc)
        before_keys = set(problem.payload)
        snapshot = copy.deepcopy({k: v for k, v in problem.payload.items()
                                  if isinstance(v, (str, int, list, dict, tuple))})
        grade(problem, parse_attempt(problem, attempt_doc), budget=2.0)
        assert set(problem.payload) == before_keys
        for key, value in snapshot.items():
            assert problem.payload[key] == value


def test_cli_grade_matches_service_report(tmp_path, capsys):
    secret = "parity"
    for problem_doc, attempt_doc in CASES:
        problem_file = tmp_path / "problem.json"
        attempt_file = tmp_path / "attempt.json"
        problem_file.write_text(json.dumps(problem_doc))
        attempt_file.write_text(json.dumps(attempt_doc))
        main(["grade", str(problem_file), str(attempt_file), "--format", "structured"])
        cli_report = json.loads(capsys.readouterr().out)

        service = ExerciseService(Store(":memory:"), secret, budget=1.0)
        teacher = service.authenticate(issue_token("t", "teacher", secret))
        student = service.authenticate(issue_token("s", "student", secret))
        course = service.create_course(teacher, "parity", "pw")
        service.enroll(student, course["id"], "pw")
        created = service.create_problem(teacher, course["id"], problem_doc)
        posed = service.pose(teacher, created["id"])
        http_report = service.submit_attempt(student, posed["id"], attempt_doc)

        shared = {k: http_report[k] for k in cli_report}
        assert shared == cli_report, problem_doc["kind"]

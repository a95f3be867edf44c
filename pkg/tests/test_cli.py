import io
import json

import pytest

from formalgrade.cli import main


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


RE_PROBLEM = {"kind": "ReConstruction", "max_points": 10,
              "payload": {"alphabet": ["a", "b"], "solutions": ["a*b"],
                          "description": "a's then one b"}}


def test_grade_full_score_exit_zero(tmp_path, capsys):
    problem = write_json(tmp_path / "p.json", RE_PROBLEM)
    attempt = write_json(tmp_path / "a.json", {"regex": "aa*b|b"})
    assert main(["grade", problem, attempt]) == 0
    out = capsys.readouterr().out
    assert "points: 10/10" in out


def test_grade_partial_exit_one(tmp_path, capsys):
    problem = write_json(tmp_path / "p.json", {
        "kind": "CfgConstruction", "max_points": 8,
        "payload": {"solution": "S -> aSb | eps"}})
    attempt = write_json(tmp_path / "a.json", {"grammar": "S -> aSb | ab"})
    assert main(["grade", problem, attempt, "--budget", "4"]) == 1
    out = capsys.readouterr().out
    # the attempt misses exactly ε, so the fraction is k/(k+1) for the k+1
    # a^n b^n words within whatever length the budget completed
    assert "(fraction " in out and "rejects it" in out
    assert "points: 8/8" not in out


def test_grade_structured_format(tmp_path, capsys):
    problem = write_json(tmp_path / "p.json", RE_PROBLEM)
    attempt = write_json(tmp_path / "a.json", {"regex": "a*b"})
    assert main(["grade", problem, attempt, "--format", "structured"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["points"] == 10 and doc["fraction"] == "1/1"


def test_grade_unparseable_attempt_exit_two(tmp_path, capsys):
    problem = write_json(tmp_path / "p.json", {
        "kind": "CfgConstruction", "max_points": 8,
        "payload": {"solution": "S -> aSb | eps"}})
    attempt = write_json(tmp_path / "a.json", {"grammar": "S -> -> b"})
    assert main(["grade", problem, attempt]) == 2


def test_grade_missing_file_exit_two(tmp_path):
    problem = write_json(tmp_path / "p.json", RE_PROBLEM)
    assert main(["grade", problem, str(tmp_path / "missing.json")]) == 2


def test_generate_emits_valid_problem(tmp_path, capsys):
    assert main(["generate", "--kind", "CfgWords", "--seed", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "CfgWords"
    from formalgrade.documents import problem_from_doc
    problem_from_doc(doc)


def test_generate_count_list(tmp_path, capsys):
    assert main(["generate", "--kind", "Cyk", "--seed", "1", "--count", "3"]) == 0
    docs = json.loads(capsys.readouterr().out)
    assert isinstance(docs, list) and len(docs) == 3


def test_generate_empty_band_exit_two(capsys):
    codes = {main(["generate", "--kind", "CfgWords", "--min", "10", "--max", "10",
                   "--seed", str(seed)]) for seed in range(6)}
    assert 2 in codes


def test_validate_ok(tmp_path, capsys):
    f = write_json(tmp_path / "g.json", {"grammar": "S -> aSb | eps"})
    assert main(["validate", "--kind", "cfg", f]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_bad(tmp_path):
    f = write_json(tmp_path / "g.json", {"grammar": "S -> ->"})
    assert main(["validate", "--kind", "cfg", f]) == 2


def test_validate_problem_with_warnings(tmp_path, capsys):
    f = write_json(tmp_path / "p.json", {
        "kind": "ReConstruction", "max_points": 5,
        "payload": {"alphabet": ["a", "b"], "solutions": ["a*b", "a*"]}})
    assert main(["validate", "--kind", "problem", f]) == 0
    assert "not equivalent" in capsys.readouterr().out


GAME_PROBLEM = {"kind": "PumpingGame", "max_points": 10, "payload": {
    "language": {"alphabet": ["a", "b"],
                 "blocks": [{"symbol": "a", "exponent": "i"},
                            {"symbol": "b", "exponent": "j"}],
                 "constraints": ["i < j"]},
    "regular": False,
    "unpumpable": [{"symbol": "a", "exponent": "n"}, {"symbol": "b", "exponent": "n+1"}],
}}


def test_game_scripted_loss(tmp_path, monkeypatch, capsys):
    problem = write_json(tmp_path / "g.json", GAME_PROBLEM)
    # claim regular (wrong), n=2 -> tutor word aabbb; split y="a" -> tutor wins
    script = io.StringIO("regular\n2\n\na\nabbb\n")
    import formalgrade.cli as cli
    monkeypatch.setattr(cli, "sys", cli.sys)
    code = cli.cmd_game(
        cli.build_parser().parse_args(["game", problem]), inp=script)
    assert code == 1


def test_game_scripted_win(tmp_path):
    problem = write_json(tmp_path / "g.json", GAME_PROBLEM)
    import formalgrade.cli as cli
    out = io.StringIO()
    # claim nonregular (right): tutor picks n=3; play a^3 b^4, then pump i=2
    from formalgrade.pumping import GameState, pumping_game_step, arith_member
    from formalgrade.documents import problem_from_doc
    prob, _ = problem_from_doc(GAME_PROBLEM)
    from formalgrade.grading import game_payload
    payload = game_payload(prob)
    state = pumping_game_step(payload, GameState(), {"kind": "claim", "claim": "nonregular"})
    w = "a" * state.n + "b" * (state.n + 1)
    state2 = pumping_game_step(payload, state, {"kind": "word", "word": w})
    x, y, z = state2.split
    breaking = next(i for i in range(0, state.n + 3)
                    if not arith_member(payload["lang"], x + y * i + z))
    script = io.StringIO(f"nonregular\n{w}\n{breaking}\n")
    code = cli.cmd_game(cli.build_parser().parse_args(["game", problem]),
                        inp=script, out=out)
    assert code == 0
    assert "winner: student" in out.getvalue()


def test_game_illegal_input_reprompts(tmp_path):
    problem = write_json(tmp_path / "g.json", GAME_PROBLEM)
    import formalgrade.cli as cli
    out = io.StringIO()
    # first word is not in the language; the loop re-prompts, then EOF abandons
    script = io.StringIO("nonregular\nba\n")
    code = cli.cmd_game(cli.build_parser().parse_args(["game", problem]),
                        inp=script, out=out)
    assert code == 2
    assert "illegal move" in out.getvalue()


def test_serve_bad_store_path(tmp_path):
    import formalgrade.cli as cli
    args = cli.build_parser().parse_args(["serve", "--config", str(tmp_path / "c.json")])
    (tmp_path / "c.json").write_text(json.dumps(
        {"store_path": "/nonexistent-dir/db.sqlite", "addr": "127.0.0.1:9"}))
    assert cli.cmd_serve(args) == 2


def test_serve_port_conflict(tmp_path):
    import socket
    import threading
    import formalgrade.cli as cli
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    sock.listen(1)
    port = sock.getsockname()[1]
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"addr": f"127.0.0.1:{port}"}))
    args = cli.build_parser().parse_args(["serve", "--config", str(config)])
    try:
        assert cli.cmd_serve(args) == 3
    finally:
        sock.close()

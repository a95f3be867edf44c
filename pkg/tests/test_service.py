import threading
import time
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from formalgrade.auth import issue_token
from formalgrade.service import ExerciseService, ServiceError, create_app
from formalgrade.store import Store

SECRET = "test-secret"


def svc(budget=2.0) -> ExerciseService:
    return ExerciseService(Store(":memory:"), SECRET, budget=budget)


def teacher(service, uid="t1"):
    return service.authenticate(issue_token(uid, "teacher", SECRET))


def student(service, uid="s1"):
    return service.authenticate(issue_token(uid, "student", SECRET))


RE_PROBLEM = {"kind": "ReWords", "max_points": 6,
              "payload": {"alphabet": ["a", "b"], "regex": "a*b",
                          "in_count": 1, "out_count": 1}}

CNF_PROBLEM = {"kind": "CnfTransform", "max_points": 10,
               "payload": {"grammar": "S -> aSb | eps"}}

GAME_PROBLEM = {"kind": "PumpingGame", "max_points": 10, "payload": {
    "language": {"alphabet": ["a", "b"],
                 "blocks": [{"symbol": "a", "exponent": "i"},
                            {"symbol": "b", "exponent": "j"}],
                 "constraints": ["i < j"]},
    "regular": False,
    "unpumpable": [{"symbol": "a", "exponent": "n"}, {"symbol": "b", "exponent": "n+1"}],
}}


def set_up_course(service, problem=RE_PROBLEM, max_attempts=None):
    t = teacher(service)
    s = student(service)
    course = service.create_course(t, "formal languages", "sesame")
    service.enroll(s, course["id"], "sesame")
    created = service.create_problem(t, course["id"], problem)
    posed = service.pose(t, created["id"], max_attempts=max_attempts)
    return t, s, course, posed


# ---------------------------------------------------------------------------
# model-level


def test_token_rejected_with_wrong_secret():
    service = svc()
    bad = issue_token("s1", "student", "other-secret")
    with pytest.raises(ServiceError) as info:
        service.authenticate(bad)
    assert info.value.status == 401


def test_course_lifecycle_and_first_attempt():
    service = svc()
    t, s, course, posed = set_up_course(service)
    report = service.submit_attempt(s, posed["id"],
                                    {"in_words": ["ab"], "out_words": ["a"]})
    assert report["points"] == 6
    assert report["counted"] is True
    views = service.list_posed(s)
    assert views[0]["attempts_used"] == 1
    assert views[0]["best_points"] == 6


def test_not_enrolled_403():
    service = svc()
    t, s, course, posed = set_up_course(service)
    outsider = student(service, "s9")
    with pytest.raises(ServiceError) as info:
        service.submit_attempt(outsider, posed["id"],
                               {"in_words": ["b"], "out_words": ["a"]})
    assert info.value.status == 403


def test_enroll_wrong_password():
    service = svc()
    t = teacher(service)
    course = service.create_course(t, "course", "pw")
    with pytest.raises(ServiceError) as info:
        service.enroll(student(service), course["id"], "nope")
    assert info.value.status == 403


def test_attempt_cap_409():
    service = svc()
    t, s, course, posed = set_up_course(service, max_attempts=2)
    for _ in range(2):
        service.submit_attempt(s, posed["id"], {"in_words": ["b"], "out_words": ["a"]})
    with pytest.raises(ServiceError) as info:
        service.submit_attempt(s, posed["id"], {"in_words": ["b"], "out_words": ["a"]})
    assert info.value.status == 409


def test_window_closed_410():
    service = svc()
    t = teacher(service)
    s = student(service)
    course = service.create_course(t, "c", "pw")
    service.enroll(s, course["id"], "pw")
    created = service.create_problem(t, course["id"], RE_PROBLEM)
    posed = service.pose(t, created["id"], start=time.time() - 100, end=time.time() - 50)
    with pytest.raises(ServiceError) as info:
        service.submit_attempt(s, posed["id"], {"in_words": ["b"], "out_words": ["a"]})
    assert info.value.status == 410


def test_invalid_payload_422_not_recorded():
    service = svc()
    t, s, course, posed = set_up_course(service, max_attempts=1)
    with pytest.raises(ServiceError) as info:
        service.submit_attempt(s, posed["id"], {"in_words": ["b"]})
    assert info.value.status == 422
    # the failed submission consumed nothing
    report = service.submit_attempt(s, posed["id"],
                                    {"in_words": ["b"], "out_words": ["a"]})
    assert report["counted"] is True


def test_cnf_shape_invalid_attempt_not_counted():
    service = svc()
    t, s, course, posed = set_up_course(service, problem=CNF_PROBLEM, max_attempts=1)
    report = service.submit_attempt(s, posed["id"], {"grammar": "S -> aSb | eps"})
    assert report["not_counted"] is True
    assert report["points"] == 0
    # the rejected-shape attempt did not consume the single allowed attempt
    ok = service.submit_attempt(
        s, posed["id"], {"grammar": "Z -> eps | AT | AB\nT -> SB\nS -> AT | AB\nA -> a\nB -> b"})
    assert ok["counted"] is True
    assert ok["points"] == 10


def test_concurrent_submissions_respect_cap():
    service = svc()
    t, s, course, posed = set_up_course(service, max_attempts=3)

    def submit(_):
        try:
            service.submit_attempt(s, posed["id"],
                                   {"in_words": ["b"], "out_words": ["a"]})
            return 1
        except ServiceError as exc:
            assert exc.status == 409
            return 0

    with ThreadPoolExecutor(max_workers=24) as pool:
        results = list(pool.map(submit, range(100)))
    assert sum(results) == 3
    counted = [doc for _, doc in service.store.items("attempts") if doc["counted"]]
    assert len(counted) == 3


def test_student_views_hide_solutions():
    service = svc()
    problem = {"kind": "ReConstruction", "max_points": 10,
               "payload": {"alphabet": ["a", "b"], "solutions": ["a*b"],
                           "description": "some a's then one b"}}
    t, s, course, posed = set_up_course(service, problem=problem)
    view = service.list_posed(s)[0]
    assert "solutions" not in view["problem"]["payload"]
    assert view["problem"]["payload"]["description"]
    game_service = svc()
    t, s, course, posed = set_up_course(game_service, problem=GAME_PROBLEM)
    view = game_service.list_posed(s)[0]
    assert "unpumpable" not in view["problem"]["payload"]


def test_grades_csv_totals_match_brute_force():
    service = svc()
    t = teacher(service)
    course = service.create_course(t, "c", "pw")
    students = [student(service, f"s{i}") for i in range(3)]
    for s in students:
        service.enroll(s, course["id"], "pw")
    p1 = service.create_problem(t, course["id"], RE_PROBLEM)
    p2 = service.create_problem(t, course["id"], CNF_PROBLEM)
    posed1 = service.pose(t, p1["id"])
    posed2 = service.pose(t, p2["id"])
    service.submit_attempt(students[0], posed1["id"],
                           {"in_words": ["b"], "out_words": ["a"]})     # 6
    service.submit_attempt(students[0], posed1["id"],
                           {"in_words": ["a"], "out_words": ["b"]})     # 0, best stays 6
    service.submit_attempt(students[1], posed2["id"], {
        "grammar": "Z -> eps | AT | AB\nT -> SB\nS -> AT | AB\nA -> a\nB -> b"})  # 10
    csv_text = service.grades_csv(t, course["id"])
    lines = csv_text.strip().splitlines()
    assert lines[0] == f"student,{posed1['id']},{posed2['id']},total"
    rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
    assert rows["s0"][1:] == ["6", "", "6"]
    assert rows["s1"][1:] == ["", "10", "10"]
    assert rows["s2"][1:] == ["", "", "0"]
    # brute-force recomputation from the attempt records
    for sid, row in rows.items():
        best: dict[str, int] = {}
        for _, doc in service.store.items("attempts"):
            if doc["student"] == sid and doc["counted"]:
                pid = doc["posed_id"]
                best[pid] = max(best.get(pid, 0), doc["report"]["points"])
        assert int(row[-1]) == sum(best.values())


def test_grades_csv_requires_teacher():
    service = svc()
    t, s, course, posed = set_up_course(service)
    with pytest.raises(ServiceError) as info:
        service.grades_csv(s, course["id"])
    assert info.value.status == 403


def test_replaying_stored_attempt_reproduces_report():
    service = svc()
    t, s, course, posed = set_up_course(service, problem=CNF_PROBLEM)
    report = service.submit_attempt(
        s, posed["id"], {"grammar": "Z -> eps | AT | AB\nT -> SB\nS -> AT | AB\nA -> a\nB -> b"})
    attempt_id = report["attempt_id"]
    replayed = service.regrade(posed["id"], attempt_id)
    stored = {k: v for k, v in report.items() if k not in ("attempt_id", "counted")}
    assert replayed == stored


def test_game_session_flow_and_auto_submit():
    service = svc()
    t, s, course, posed = set_up_course(service, problem=GAME_PROBLEM, max_attempts=2)
    view = service.game_move(s, posed["id"], {"kind": "claim", "claim": "regular"})
    assert view["phase"] == "choose_n"
    view = service.game_move(s, posed["id"], {"kind": "n", "n": 2})
    assert view["phase"] == "choose_split"
    w = view["w"]
    with pytest.raises(ServiceError) as info:
        service.game_move(s, posed["id"], {"kind": "split", "x": w, "y": "", "z": ""})
    assert info.value.status == 422
    view = service.game_move(s, posed["id"],
                             {"kind": "split", "x": "", "y": w[0], "z": w[1:]})
    assert view["winner"] == "tutor"
    assert view["report"]["points"] == 0
    assert view["report"]["counted"] is True
    assert any("winner" in line for line in view["transcript"])
    # session is spent; the next move starts a fresh game
    view = service.game_move(s, posed["id"], {"kind": "claim", "claim": "nonregular"})
    assert view["phase"] == "choose_word"


def test_game_on_non_game_problem_409():
    service = svc()
    t, s, course, posed = set_up_course(service)
    with pytest.raises(ServiceError) as info:
        service.game_move(s, posed["id"], {"kind": "claim", "claim": "regular"})
    assert info.value.status == 409


def test_generate_via_service():
    service = svc()
    t = teacher(service)
    docs = service.generate(t, "CfgWords", seed=3, count=2)
    assert len(docs) == 2
    assert all(d["kind"] == "CfgWords" for d in docs)


# ---------------------------------------------------------------------------
# HTTP-level


@pytest.fixture()
def client():
    app = create_app(token_secret=SECRET, budget=2.0)
    with TestClient(app) as c:
        yield c


def bearer(uid, role):
    return {"Authorization": f"Bearer {issue_token(uid, role, SECRET)}"}


def test_http_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_http_requires_token(client):
    assert client.get("/posed").status_code == 401


def test_http_full_cycle(client):
    t = bearer("t1", "teacher")
    s = bearer("s1", "student")
    course = client.post("/courses", json={"title": "c", "password": "pw"},
                         headers=t).json()
    assert client.post(f"/courses/{course['id']}/enroll", json={"password": "pw"},
                       headers=s).status_code == 200
    problem = client.post(f"/courses/{course['id']}/problems", json=RE_PROBLEM,
                          headers=t).json()
    posed = client.post(f"/problems/{problem['id']}/pose", json={"max_attempts": 5},
                        headers=t).json()
    listing = client.get("/posed", headers=s).json()
    assert listing[0]["id"] == posed["id"]
    report = client.post(f"/posed/{posed['id']}/attempts",
                         json={"in_words": ["ab"], "out_words": ["ba"]},
                         headers=s).json()
    assert report["points"] == 6
    grades = client.get(f"/courses/{course['id']}/grades.csv", headers=t)
    assert grades.headers["content-type"].startswith("text/csv")
    assert "s1,6,6" in grades.text
    assert client.get(f"/courses/{course['id']}/grades.csv", headers=s).status_code == 403


def test_http_generate_and_solve_generated(client):
    t = bearer("t1", "teacher")
    docs = client.post("/generate", json={"kind": "Cyk", "seed": 5}, headers=t).json()
    assert docs[0]["kind"] == "Cyk"


def test_http_error_codes(client):
    t = bearer("t1", "teacher")
    s = bearer("s1", "student")
    course = client.post("/courses", json={"title": "c", "password": "pw"},
                         headers=t).json()
    client.post(f"/courses/{course['id']}/enroll", json={"password": "pw"}, headers=s)
    problem = client.post(f"/courses/{course['id']}/problems", json=RE_PROBLEM,
                          headers=t).json()
    posed = client.post(f"/problems/{problem['id']}/pose", json={"max_attempts": 1},
                        headers=t).json()
    bad = client.post(f"/posed/{posed['id']}/attempts", json={"in_words": ["b"]},
                      headers=s)
    assert bad.status_code == 422
    client.post(f"/posed/{posed['id']}/attempts",
                json={"in_words": ["b"], "out_words": ["a"]}, headers=s)
    again = client.post(f"/posed/{posed['id']}/attempts",
                        json={"in_words": ["b"], "out_words": ["a"]}, headers=s)
    assert again.status_code == 409


def test_http_trace_endpoints(client):
    t = bearer("t1", "teacher")
    from formalgrade.pda import pda_to_doc
    from formalgrade.machines import tm_to_doc
    from formalgrade.programs import base_program
    from .test_pda import balanced_pda
    run = client.post("/trace/pda", json={"pda": pda_to_doc(balanced_pda()),
                                          "word": "ab"}, headers=t).json()
    assert run["verdict"] == "accepted"
    assert run["steps"][0]["stack"] == "Z"
    tm = tm_to_doc(base_program("increment").reference_tm)
    out = client.post("/trace/tm", json={"tm": tm, "input": [2]}, headers=t).json()
    assert out["output"] == [3]

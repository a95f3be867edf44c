"""Course and problem lifecycle behind an HTTP API.

The model (`ExerciseService`) is plain Python over the embedded store; the
FastAPI app is a thin shell translating HTTP to model calls. Grading runs
outside any lock; recording an attempt is atomic per (student, posed problem)
so attempt caps hold under concurrent submissions.
"""

from __future__ import annotations

import csv
import io
import threading
import time
from typing import Any

from . import apg, auth, documents, grading, machines, pda
from .documents import Problem
from .errors import (
    BudgetTooSmall,
    IllegalMove,
    InvalidAttempt,
    InvalidProblem,
    NoCandidateInBand,
    ParseError,
)
from .pumping import GameState, game_state_from_doc, game_state_to_doc, pumping_game_step
from .store import Store

COURSES = "courses"
PROBLEMS = "problems"
POSED = "posed"
ATTEMPTS = "attempts"
GAMES = "games"


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


class ExerciseService:
    def __init__(self, store: Store, token_secret: str, budget: float = 1.0):
        self.store = store
        self.token_secret = token_secret
        self.budget = budget
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- auth ---------------------------------------------------------------

    def authenticate(self, token: str | None) -> auth.Identity:
        if not token:
            raise ServiceError(401, "missing bearer token")
        identity = auth.verify_token(token, self.token_secret)
        if identity is None:
            raise ServiceError(401, "invalid token")
        return identity

    def _lock_for(self, student: str, posed_id: str) -> threading.Lock:
        key = (student, posed_id)
        with self._locks_guard:
            if key not in self._locks:
                self._locks[key] = threading.Lock()
            return self._locks[key]

    # -- courses ------------------------------------------------------------

    def create_course(self, who: auth.Identity, title: str, password: str) -> dict:
        if who.role != auth.TEACHER:
            raise ServiceError(403, "only teachers create courses")
        if not title:
            raise ServiceError(422, "courses need a title")
        course_id = f"c{self.store.next_id('course')}"
        doc = {"id": course_id, "title": title, "password": password,
               "teachers": [who.user_id], "students": []}
        self.store.put(COURSES, course_id, doc)
        return self._course_view(doc)

    def _course(self, course_id: str) -> dict:
        doc = self.store.get(COURSES, course_id)
        if doc is None:
            raise ServiceError(404, f"no course {course_id}")
        return doc

    @staticmethod
    def _course_view(doc: dict) -> dict:
        return {k: v for k, v in doc.items() if k != "password"}

    def enroll(self, who: auth.Identity, course_id: str, password: str) -> dict:
        course = self._course(course_id)
        if password != course["password"]:
            raise ServiceError(403, "wrong enrollment password")
        if who.user_id not in course["students"]:
            course["students"].append(who.user_id)
            self.store.put(COURSES, course_id, course)
        return self._course_view(course)

    def _require_teacher(self, who: auth.Identity, course: dict):
        if who.role != auth.TEACHER or who.user_id not in course["teachers"]:
            raise ServiceError(403, "you do not teach this course")

    def _require_member(self, who: auth.Identity, course: dict):
        if who.user_id in course["teachers"] or who.user_id in course["students"]:
            return
        raise ServiceError(403, "not enrolled in this course")

    # -- problems and posing --------------------------------------------------

    def create_problem(self, who: auth.Identity, course_id: str, problem_doc: dict) -> dict:
        course = self._course(course_id)
        self._require_teacher(who, course)
        try:
            problem, warnings = documents.problem_from_doc(problem_doc)
        except InvalidProblem as exc:
            raise ServiceError(422, str(exc)) from exc
        problem_id = f"p{self.store.next_id('problem')}"
        self.store.put(PROBLEMS, problem_id, {
            "id": problem_id, "course_id": course_id,
            "doc": documents.problem_to_doc(problem), "warnings": warnings})
        return {"id": problem_id, "warnings": warnings}

    def pose(self, who: auth.Identity, problem_id: str, max_points: int | None = None,
             max_attempts: int | None = None, start: float | None = None,
             end: float | None = None) -> dict:
        record = self.store.get(PROBLEMS, problem_id)
        if record is None:
            raise ServiceError(404, f"no problem {problem_id}")
        course = self._course(record["course_id"])
        self._require_teacher(who, course)
        if start is not None and end is not None and end < start:
            raise ServiceError(422, "the posing window must end after it starts")
        if max_attempts is not None and max_attempts < 1:
            raise ServiceError(422, "max_attempts must be positive when limited")
        posed_id = f"e{self.store.next_id('posed')}"
        doc = {
            "id": posed_id,
            "problem_id": problem_id,
            "course_id": record["course_id"],
            "max_points": max_points or record["doc"]["max_points"],
            "max_attempts": max_attempts,
            "start": start,
            "end": end,
            "posed_at": time.time(),
        }
        self.store.put(POSED, posed_id, doc)
        return doc

    def _posed(self, posed_id: str) -> dict:
        doc = self.store.get(POSED, posed_id)
        if doc is None:
            raise ServiceError(404, f"no posed problem {posed_id}")
        return doc

    def _problem_for(self, posed: dict) -> Problem:
        record = self.store.get(PROBLEMS, posed["problem_id"])
        problem, _ = documents.problem_from_doc(
            {**record["doc"], "max_points": posed["max_points"]})
        return problem

    def list_posed(self, who: auth.Identity) -> list[dict]:
        views = []
        for posed_id, posed in self.store.items(POSED):
            course = self._course(posed["course_id"])
            if who.user_id not in course["students"] and \
               who.user_id not in course["teachers"]:
                continue
            record = self.store.get(PROBLEMS, posed["problem_id"])
            attempts = self._attempts_of(who.user_id, posed_id)
            counted = [a for a in attempts if a["counted"]]
            best = max((a["report"]["points"] for a in counted), default=None)
            views.append({
                "id": posed_id,
                "course_id": posed["course_id"],
                "max_points": posed["max_points"],
                "max_attempts": posed["max_attempts"],
                "start": posed["start"],
                "end": posed["end"],
                "attempts_used": len(counted),
                "best_points": best,
                "problem": documents.student_view(record["doc"]),
            })
        return views

    # -- attempts -------------------------------------------------------------

    def _attempts_of(self, student: str, posed_id: str) -> list[dict]:
        return [doc for _, doc in self.store.items(ATTEMPTS)
                if doc["student"] == student and doc["posed_id"] == posed_id]

    def _check_window(self, posed: dict):
        now = time.time()
        if posed["start"] is not None and now < posed["start"]:
            raise ServiceError(410, "the problem is not open yet")
        if posed["end"] is not None and now > posed["end"]:
            raise ServiceError(410, "the submission window has closed")

    def _counted_remaining(self, posed: dict, student: str) -> bool:
        if posed["max_attempts"] is None:
            return True
        used = sum(1 for a in self._attempts_of(student, posed["id"]) if a["counted"])
        return used < posed["max_attempts"]

    def _record_attempt(self, posed: dict, student: str, payload: dict,
                        report: grading.GradeReport) -> dict:
        """Atomically enforce the attempt cap and persist the record."""
        with self._lock_for(student, posed["id"]):
            if report.not_counted is False and not self._counted_remaining(posed, student):
                raise ServiceError(409, "no attempts remaining")
            attempt_id = f"a{self.store.next_id('attempt'):08d}"
            record = {
                "id": attempt_id,
                "posed_id": posed["id"],
                "student": student,
                "payload": payload,
                "report": report.to_doc(),
                "timestamp": time.time(),
                "counted": not report.not_counted,
            }
            self.store.put(ATTEMPTS, attempt_id, record)
            return record

    def submit_attempt(self, who: auth.Identity, posed_id: str, payload: dict) -> dict:
        posed = self._posed(posed_id)
        course = self._course(posed["course_id"])
        self._require_member(who, course)
        self._check_window(posed)
        if not self._counted_remaining(posed, who.user_id):
            raise ServiceError(409, "no attempts remaining")
        problem = self._problem_for(posed)
        try:
            attempt = documents.parse_attempt(problem, payload)
        except InvalidAttempt as exc:
            raise ServiceError(422, str(exc)) from exc
        try:
            report = grading.grade(problem, attempt, budget=self.budget)
        except BudgetTooSmall:
            try:
                report = grading.grade(problem, attempt, budget=self.budget * 4)
            except BudgetTooSmall as exc:
                raise ServiceError(503, "grading budget exhausted; retry later") from exc
        except (InvalidAttempt, ParseError) as exc:
            raise ServiceError(422, str(exc)) from exc
        record = self._record_attempt(posed, who.user_id, payload, report)
        return {**record["report"], "attempt_id": record["id"],
                "counted": record["counted"]}

    def regrade(self, posed_id: str, attempt_id: str) -> dict:
        """Replay a stored attempt deterministically from recorded bounds."""
        posed = self._posed(posed_id)
        record = self.store.get(ATTEMPTS, attempt_id)
        if record is None or record["posed_id"] != posed_id:
            raise ServiceError(404, f"no attempt {attempt_id}")
        problem = self._problem_for(posed)
        attempt = documents.parse_attempt(problem, record["payload"])
        meta = record["report"]["metadata"]
        bounds = {}
        if "lengths_completed" in meta:
            bounds["max_len"] = meta["lengths_completed"]
        if "tested" in meta:
            bounds["max_tests"] = meta["tested"]
        report = grading.grade(problem, attempt, budget=self.budget, bounds=bounds)
        return report.to_doc()

    # -- pumping game sessions --------------------------------------------------

    def game_move(self, who: auth.Identity, posed_id: str, move: dict) -> dict:
        posed = self._posed(posed_id)
        course = self._course(posed["course_id"])
        self._require_member(who, course)
        self._check_window(posed)
        problem = self._problem_for(posed)
        if problem.kind != documents.PUMPING_GAME:
            raise ServiceError(409, "this problem is not a pumping-lemma game")
        key = f"{posed_id}:{who.user_id}"
        session = self.store.get(GAMES, key)
        if session is None or session["state"].get("winner"):
            if not self._counted_remaining(posed, who.user_id):
                raise ServiceError(409, "no attempts remaining")
            session = {"state": game_state_to_doc(GameState()), "moves": []}
        state = game_state_from_doc(session["state"])
        payload = grading.game_payload(problem)
        try:
            state = pumping_game_step(payload, state, move)
        except IllegalMove as exc:
            raise ServiceError(422, f"illegal move: {exc.reason}") from exc
        session = {"state": game_state_to_doc(state), "moves": session["moves"] + [move]}
        self.store.put(GAMES, key, session)
        view: dict[str, Any] = dict(session["state"])
        if state.winner is not None:
            report = grading.grade_pumping_game(problem, state)
            record = self._record_attempt(posed, who.user_id,
                                          {"moves": session["moves"]}, report)
            view["report"] = {**record["report"], "attempt_id": record["id"],
                              "counted": record["counted"]}
            view["transcript"] = [f.text for f in report.feedback]
        return view

    # -- grade overview -----------------------------------------------------

    def grades_csv(self, who: auth.Identity, course_id: str) -> str:
        course = self._course(course_id)
        self._require_teacher(who, course)
        posed = sorted((doc for _, doc in self.store.items(POSED)
                        if doc["course_id"] == course_id),
                       key=lambda d: (d["posed_at"], d["id"]))
        attempts = [doc for _, doc in self.store.items(ATTEMPTS)
                    if doc["counted"] and any(p["id"] == doc["posed_id"] for p in posed)]
        best: dict[tuple[str, str], int] = {}
        for a in attempts:
            key = (a["student"], a["posed_id"])
            points = a["report"]["points"]
            if key not in best or points > best[key]:
                best[key] = points
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["student"] + [p["id"] for p in posed] + ["total"])
        for student in sorted(course["students"]):
            row: list[Any] = [student]
            total = 0
            for p in posed:
                points = best.get((student, p["id"]))
                row.append("" if points is None else points)
                total += points or 0
            writer.writerow(row + [total])
        return out.getvalue()

    # -- generation -----------------------------------------------------------

    def generate(self, who: auth.Identity, kind: str, d_min: int = 1, d_max: int = 10,
                 seed: int = 0, count: int = 1) -> list[dict]:
        if count < 1 or count > 20:
            raise ServiceError(422, "count must be between 1 and 20")
        out = []
        try:
            for i in range(count):
                req = apg.GenerationRequest(kind=kind, d_min=d_min, d_max=d_max,
                                            seed=seed + i)
                out.append(documents.problem_to_doc(apg.generate(req)))
        except ValueError as exc:
            raise ServiceError(422, str(exc)) from exc
        except NoCandidateInBand as exc:
            raise ServiceError(422, str(exc)) from exc
        return out

    # -- traces (used by the feedback panel's simulate buttons) ----------------

    def trace_pda(self, who: auth.Identity, pda_doc: dict, word: str) -> dict:
        try:
            machine = pda.pda_from_doc(pda_doc)
            run = pda.pda_trace(machine, word, pda.step_cap_for(word))
        except Exception as exc:
            raise ServiceError(422, f"cannot trace: {exc}") from exc
        return pda.run_to_doc(run)

    def trace_tm(self, who: auth.Identity, tm_doc: dict, inputs: list[int]) -> dict:
        try:
            machine = machines.tm_from_doc(tm_doc)
            result = machines.run_tm(machine, tuple(inputs), step_cap=1000)
        except Exception as exc:
            raise ServiceError(422, f"cannot trace: {exc}") from exc
        return {"input": list(result.input), "status": result.status,
                "output": list(result.output) if result.output is not None else None}


# ---------------------------------------------------------------------------
# FastAPI shell


def create_app(store_path: str = ":memory:", token_secret: str = "dev-secret",
               budget: float = 1.0):
    from fastapi import Depends, FastAPI, Header, HTTPException, Request
    from fastapi.responses import JSONResponse, PlainTextResponse

    service = ExerciseService(Store(store_path), token_secret, budget=budget)
    app = FastAPI(title="formalgrade")
    app.state.service = service

    def identity(authorization: str | None = Header(default=None)) -> auth.Identity:
        token = None
        if authorization and authorization.lower().startswith("bearer "):
            token = authorization[7:]
        try:
            return service.authenticate(token)
        except ServiceError as exc:
            raise HTTPException(status_code=exc.status, detail=exc.message)

    @app.exception_handler(ServiceError)
    async def service_error(_request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={"detail": exc.message})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/courses")
    def create_course(body: dict, who: auth.Identity = Depends(identity)):
        return service.create_course(who, body.get("title", ""), body.get("password", ""))

    @app.post("/courses/{course_id}/enroll")
    def enroll(course_id: str, body: dict, who: auth.Identity = Depends(identity)):
        return service.enroll(who, course_id, body.get("password", ""))

    @app.post("/courses/{course_id}/problems")
    def create_problem(course_id: str, body: dict, who: auth.Identity = Depends(identity)):
        return service.create_problem(who, course_id, body)

    @app.post("/problems/{problem_id}/pose")
    def pose(problem_id: str, body: dict, who: auth.Identity = Depends(identity)):
        return service.pose(who, problem_id,
                            max_points=body.get("max_points"),
                            max_attempts=body.get("max_attempts"),
                            start=body.get("start"), end=body.get("end"))

    @app.get("/posed")
    def list_posed(who: auth.Identity = Depends(identity)):
        return service.list_posed(who)

    @app.post("/posed/{posed_id}/attempts")
    def submit(posed_id: str, body: dict, who: auth.Identity = Depends(identity)):
        return service.submit_attempt(who, posed_id, body)

    @app.post("/posed/{posed_id}/game")
    def game(posed_id: str, body: dict, who: auth.Identity = Depends(identity)):
        return service.game_move(who, posed_id, body)

    @app.get("/courses/{course_id}/grades.csv")
    def grades(course_id: str, who: auth.Identity = Depends(identity)):
        return PlainTextResponse(service.grades_csv(who, course_id),
                                 media_type="text/csv; charset=utf-8")

    @app.post("/generate")
    def generate(body: dict, who: auth.Identity = Depends(identity)):
        return service.generate(who, body.get("kind", ""),
                                d_min=body.get("d_min", 1), d_max=body.get("d_max", 10),
                                seed=body.get("seed", 0), count=body.get("count", 1))

    @app.post("/trace/pda")
    def trace_pda(body: dict, who: auth.Identity = Depends(identity)):
        return service.trace_pda(who, body.get("pda", {}), body.get("word", ""))

    @app.post("/trace/tm")
    def trace_tm(body: dict, who: auth.Identity = Depends(identity)):
        return service.trace_tm(who, body.get("tm", {}), body.get("input", []))

    return app

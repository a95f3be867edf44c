"""Problem and attempt documents: the JSON shapes shared by API, CLI and tests.

A problem document is {"kind", "max_points", "payload"}; the payload schema is
kind-specific. Parsing validates everything a teacher could get wrong and
returns warnings for suspicious-but-legal payloads (e.g. extra solution REs
that are not equivalent to the primary one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import grammar, machines, pda, pumping, regular
from .errors import InvalidAttempt, InvalidProblem

RE_WORDS = "ReWords"
CFG_WORDS = "CfgWords"
PDA_WORDS = "PdaWords"
RE_CONSTRUCTION = "ReConstruction"
CFG_CONSTRUCTION = "CfgConstruction"
PDA_CONSTRUCTION = "PdaConstruction"
RE_TO_NFA = "ReToNfa"
EQUIV_DECIDE = "EquivClassesDecide"
EQUIV_FIND = "EquivClassesFind"
PUMPING_GAME = "PumpingGame"
FIND_DERIVATION = "FindDerivation"
CNF_TRANSFORM = "CnfTransform"
CYK = "Cyk"
WHILE_TO_TM = "WhileToTm"

KINDS = (
    RE_WORDS, CFG_WORDS, PDA_WORDS,
    RE_CONSTRUCTION, CFG_CONSTRUCTION, PDA_CONSTRUCTION,
    RE_TO_NFA, EQUIV_DECIDE, EQUIV_FIND, PUMPING_GAME,
    FIND_DERIVATION, CNF_TRANSFORM, CYK, WHILE_TO_TM,
)

#: document payload keys a student must never see (solutions, winning templates)
SECRET_FIELDS: dict[str, tuple[str, ...]] = {
    RE_CONSTRUCTION: ("solutions",),
    CFG_CONSTRUCTION: ("solution",),
    PDA_CONSTRUCTION: ("solution",),
    PUMPING_GAME: ("unpumpable",),
}


@dataclass(frozen=True)
class Problem:
    kind: str
    payload: dict[str, Any]
    max_points: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidProblem(f"unknown problem kind {self.kind!r}")
        if not isinstance(self.max_points, int) or self.max_points < 1:
            raise InvalidProblem("max_points must be a positive integer")


def _need(doc: dict, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InvalidProblem(f"payload is missing {', '.join(missing)}")


def _alphabet(doc: dict) -> frozenset[str]:
    _need(doc, "alphabet")
    alpha = frozenset(doc["alphabet"])
    if not alpha or any(len(s) != 1 for s in alpha):
        raise InvalidProblem("alphabet must be a nonempty list of single characters")
    return alpha


def _counts(doc: dict) -> tuple[int, int]:
    _need(doc, "in_count", "out_count")
    inc, outc = doc["in_count"], doc["out_count"]
    if not all(isinstance(c, int) and c >= 0 for c in (inc, outc)) or inc + outc < 1:
        raise InvalidProblem("in_count/out_count must be nonnegative with a positive sum")
    return inc, outc


def problem_from_doc(doc: dict) -> tuple[Problem, list[str]]:
    """Parse and validate a problem document; returns (problem, warnings)."""
    if not isinstance(doc, dict):
        raise InvalidProblem("problem document must be an object")
    _need(doc, "kind", "payload")
    kind = doc["kind"]
    if kind not in KINDS:
        raise InvalidProblem(f"unknown problem kind {kind!r}")
    raw = doc["payload"]
    max_points = doc.get("max_points", 10)
    warnings: list[str] = []
    payload: dict[str, Any] = {}
    try:
        if kind == RE_WORDS:
            alpha = _alphabet(raw)
            _need(raw, "regex")
            payload = {"alphabet": alpha,
                       "regex": regular.parse_regex(raw["regex"], alpha)}
            payload["in_count"], payload["out_count"] = _counts(raw)
        elif kind == CFG_WORDS:
            _need(raw, "grammar")
            g = grammar.sanitize(grammar.parse_cfg(raw["grammar"]))
            payload = {"grammar": g}
            payload["in_count"], payload["out_count"] = _counts(raw)
        elif kind == PDA_WORDS:
            _need(raw, "pda")
            payload = {"pda": pda.pda_from_doc(raw["pda"])}
            payload["in_count"], payload["out_count"] = _counts(raw)
        elif kind == RE_CONSTRUCTION:
            alpha = _alphabet(raw)
            _need(raw, "solutions")
            if not raw["solutions"]:
                raise InvalidProblem("at least one solution RE is required")
            solutions = tuple(regular.parse_regex(s, alpha) for s in raw["solutions"])
            for idx, extra in enumerate(solutions[1:], start=1):
                if not regular.regular_equiv(solutions[0], extra, alphabet=alpha).equal:
                    warnings.append(
                        f"solution RE #{idx} is not equivalent to the primary solution")
            payload = {"alphabet": alpha, "solutions": solutions,
                       "description": raw.get("description", "")}
        elif kind == CFG_CONSTRUCTION:
            _need(raw, "solution")
            payload = {"solution": grammar.sanitize(grammar.parse_cfg(raw["solution"])),
                       "description": raw.get("description", "")}
        elif kind == PDA_CONSTRUCTION:
            _need(raw, "solution")
            payload = {"solution": pda.pda_from_doc(raw["solution"]),
                       "description": raw.get("description", "")}
        elif kind == RE_TO_NFA:
            alpha = _alphabet(raw)
            _need(raw, "goal")
            payload = {"alphabet": alpha, "goal": regular.parse_regex(raw["goal"], alpha)}
        elif kind == EQUIV_DECIDE:
            alpha = _alphabet(raw)
            _need(raw, "regex", "w1", "w2")
            _check_word(raw["w1"], alpha)
            _check_word(raw["w2"], alpha)
            payload = {"alphabet": alpha, "regex": regular.parse_regex(raw["regex"], alpha),
                       "w1": raw["w1"], "w2": raw["w2"]}
        elif kind == EQUIV_FIND:
            alpha = _alphabet(raw)
            _need(raw, "regex", "base_word", "count")
            _check_word(raw["base_word"], alpha)
            if not isinstance(raw["count"], int) or raw["count"] < 1:
                raise InvalidProblem("count must be a positive integer")
            payload = {"alphabet": alpha, "regex": regular.parse_regex(raw["regex"], alpha),
                       "base_word": raw["base_word"], "count": raw["count"]}
        elif kind == PUMPING_GAME:
            _need(raw, "language", "regular")
            lang = pumping.lang_from_doc(raw["language"])
            regular_flag = bool(raw["regular"])
            template = None
            if not regular_flag:
                _need(raw, "unpumpable")
                template = pumping.template_from_doc(raw["unpumpable"])
                for n in range(1, 7):
                    w = pumping.instantiate_template(template, n)
                    if len(w) < n or not pumping.arith_member(lang, w):
                        raise InvalidProblem(
                            f"unpumpable template fails at n = {n}: {w!r}")
            payload = {"lang": lang, "regular": regular_flag, "template": template,
                       "description": raw.get("description", "")}
        elif kind == FIND_DERIVATION:
            _need(raw, "grammar", "word", "mode")
            g = grammar.parse_cfg(raw["grammar"])
            mode = raw["mode"]
            if mode not in ("any", "leftmost", "rightmost"):
                raise InvalidProblem(f"unknown derivation mode {mode!r}")
            word = raw["word"]
            if not grammar.cfg_accepts(g, word):
                raise InvalidProblem(f"{word!r} is not derivable in the grammar")
            payload = {"grammar": g, "word": word, "mode": mode}
        elif kind == CNF_TRANSFORM:
            _need(raw, "grammar")
            payload = {"grammar": grammar.sanitize(grammar.parse_cfg(raw["grammar"]))}
        elif kind == CYK:
            _need(raw, "grammar", "word")
            g = grammar.parse_cfg(raw["grammar"])
            check = grammar.is_cnf(g)
            if not check.ok:
                raise InvalidProblem(
                    "CYK grammars must be in CNF: "
                    + "; ".join(v.message for v in check.violations))
            if not raw["word"]:
                raise InvalidProblem("CYK needs a nonempty word")
            payload = {"grammar": g, "word": raw["word"]}
        elif kind == WHILE_TO_TM:
            _need(raw, "program")
            program = machines.parse_while(raw["program"], raw.get("var_count"))
            payload = {"program": program}
    except InvalidProblem:
        raise
    except Exception as exc:
        raise InvalidProblem(f"bad {kind} payload: {exc}") from exc
    return Problem(kind=kind, payload=payload, max_points=max_points), warnings


def _check_word(w, alpha: frozenset[str]):
    if not isinstance(w, str) or any(c not in alpha for c in w):
        raise InvalidProblem(f"word {w!r} is not over the declared alphabet")


def problem_to_doc(problem: Problem) -> dict:
    """Serialize back to the document shape (canonical printed forms)."""
    p = problem.payload
    kind = problem.kind
    if kind == RE_WORDS:
        raw: dict[str, Any] = {"alphabet": sorted(p["alphabet"]),
                               "regex": regular.print_regex(p["regex"]),
                               "in_count": p["in_count"], "out_count": p["out_count"]}
    elif kind == CFG_WORDS:
        raw = {"grammar": grammar.print_cfg(p["grammar"]),
               "in_count": p["in_count"], "out_count": p["out_count"]}
    elif kind == PDA_WORDS:
        raw = {"pda": pda.pda_to_doc(p["pda"]),
               "in_count": p["in_count"], "out_count": p["out_count"]}
    elif kind == RE_CONSTRUCTION:
        raw = {"alphabet": sorted(p["alphabet"]),
               "solutions": [regular.print_regex(s) for s in p["solutions"]],
               "description": p["description"]}
    elif kind == CFG_CONSTRUCTION:
        raw = {"solution": grammar.print_cfg(p["solution"]), "description": p["description"]}
    elif kind == PDA_CONSTRUCTION:
        raw = {"solution": pda.pda_to_doc(p["solution"]), "description": p["description"]}
    elif kind == RE_TO_NFA:
        raw = {"alphabet": sorted(p["alphabet"]), "goal": regular.print_regex(p["goal"])}
    elif kind == EQUIV_DECIDE:
        raw = {"alphabet": sorted(p["alphabet"]), "regex": regular.print_regex(p["regex"]),
               "w1": p["w1"], "w2": p["w2"]}
    elif kind == EQUIV_FIND:
        raw = {"alphabet": sorted(p["alphabet"]), "regex": regular.print_regex(p["regex"]),
               "base_word": p["base_word"], "count": p["count"]}
    elif kind == PUMPING_GAME:
        raw = {"language": pumping.lang_to_doc(p["lang"]), "regular": p["regular"],
               "description": p["description"]}
        if p["template"] is not None:
            raw["unpumpable"] = pumping.template_to_doc(p["template"])
    elif kind == FIND_DERIVATION:
        raw = {"grammar": grammar.print_cfg(p["grammar"]), "word": p["word"],
               "mode": p["mode"]}
    elif kind == CNF_TRANSFORM:
        raw = {"grammar": grammar.print_cfg(p["grammar"])}
    elif kind == CYK:
        raw = {"grammar": grammar.print_cfg(p["grammar"]), "word": p["word"]}
    else:  # WHILE_TO_TM
        raw = {"program": machines.print_while(p["program"]),
               "var_count": p["program"].var_count}
    return {"kind": kind, "max_points": problem.max_points, "payload": raw}


def student_view(problem_doc: dict) -> dict:
    """The document a student may see: secret payload fields stripped."""
    secrets = SECRET_FIELDS.get(problem_doc.get("kind"), ())
    payload = {k: v for k, v in problem_doc.get("payload", {}).items()
               if k not in secrets}
    return {**problem_doc, "payload": payload}


# ---------------------------------------------------------------------------
# attempts


def _require_attempt(doc: dict, *keys):
    if not isinstance(doc, dict):
        raise InvalidAttempt("attempt document must be an object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InvalidAttempt(f"attempt is missing {', '.join(missing)}")


def parse_attempt(problem: Problem, doc: dict):
    """Parse an attempt document into the object its grader consumes.

    Structural problems (missing fields, unparseable machines/tables) raise
    InvalidAttempt; textual answers that merely fail to parse (REs, grammars)
    are passed through for the grader to handle per its contract.
    """
    kind = problem.kind
    if kind in (RE_WORDS, CFG_WORDS, PDA_WORDS):
        _require_attempt(doc, "in_words", "out_words")
        if not (isinstance(doc["in_words"], list) and isinstance(doc["out_words"], list)):
            raise InvalidAttempt("in_words/out_words must be lists")
        return {"in_words": [str(w) for w in doc["in_words"]],
                "out_words": [str(w) for w in doc["out_words"]]}
    if kind == RE_CONSTRUCTION:
        _require_attempt(doc, "regex")
        return str(doc["regex"])
    if kind in (CFG_CONSTRUCTION, CNF_TRANSFORM):
        _require_attempt(doc, "grammar")
        try:
            return grammar.parse_cfg(str(doc["grammar"]))
        except Exception as exc:
            raise InvalidAttempt(f"unparseable grammar: {exc}") from exc
    if kind == PDA_CONSTRUCTION:
        _require_attempt(doc, "pda")
        try:
            return pda.pda_from_doc(doc["pda"])
        except Exception as exc:
            raise InvalidAttempt(f"unparseable PDA: {exc}") from exc
    if kind == RE_TO_NFA:
        _require_attempt(doc, "automaton")
        return block_nfa_from_doc(doc["automaton"], problem.payload["alphabet"])
    if kind == EQUIV_DECIDE:
        _require_attempt(doc, "verdict", "justification")
        if doc["verdict"] not in ("equivalent", "different"):
            raise InvalidAttempt("verdict must be 'equivalent' or 'different'")
        return {"verdict": doc["verdict"], "justification": str(doc["justification"])}
    if kind == EQUIV_FIND:
        _require_attempt(doc, "words")
        if not isinstance(doc["words"], list):
            raise InvalidAttempt("words must be a list")
        return [str(w) for w in doc["words"]]
    if kind == FIND_DERIVATION:
        _require_attempt(doc, "steps")
        if not isinstance(doc["steps"], list) or not doc["steps"]:
            raise InvalidAttempt("steps must be a nonempty list")
        return grammar.Derivation(mode=problem.payload["mode"],
                                  steps=tuple(str(s) for s in doc["steps"]))
    if kind == CYK:
        _require_attempt(doc, "rows")
        return cyk_rows_from_doc(doc["rows"], problem.payload["grammar"],
                                 problem.payload["word"])
    if kind == WHILE_TO_TM:
        _require_attempt(doc, "tm")
        try:
            return machines.tm_from_doc(doc["tm"])
        except Exception as exc:
            raise InvalidAttempt(f"unparseable Turing machine: {exc}") from exc
    if kind == PUMPING_GAME:
        _require_attempt(doc, "moves")
        if not isinstance(doc["moves"], list):
            raise InvalidAttempt("moves must be a list")
        return doc["moves"]
    raise InvalidAttempt(f"no attempt parser for {kind}")


def block_nfa_from_doc(doc: dict, alphabet: frozenset[str]) -> regular.BlockNfa:
    _require_attempt(doc, "states", "initial", "accepting", "transitions")
    try:
        states = frozenset(doc["states"])
        transitions = set()
        for t in doc["transitions"]:
            symbol = None if t["read"] == "eps" else t["read"]
            if symbol is not None and symbol not in alphabet:
                raise InvalidAttempt(f"transition symbol {symbol!r} outside the alphabet")
            transitions.add((t["from"], symbol, t["to"]))
        nfa = regular.Nfa(states=states, alphabet=alphabet,
                          transitions=frozenset(transitions),
                          initial=doc["initial"], accepting=frozenset(doc["accepting"]))
        blocks = []
        for b in doc.get("blocks", []):
            label = regular.parse_regex(str(b["label"]), alphabet)
            blocks.append(regular.BlockRegion(label=label, entry=b["entry"],
                                              exit=b["exit"],
                                              inner=frozenset(b.get("inner", []))))
        return regular.BlockNfa(nfa=nfa, blocks=tuple(blocks))
    except InvalidAttempt:
        raise
    except Exception as exc:
        raise InvalidAttempt(f"unparseable automaton: {exc}") from exc


def block_nfa_to_doc(bn: regular.BlockNfa) -> dict:
    return {
        "states": sorted(bn.nfa.states),
        "alphabet": sorted(bn.nfa.alphabet),
        "initial": bn.nfa.initial,
        "accepting": sorted(bn.nfa.accepting),
        "transitions": [
            {"from": src, "read": "eps" if sym is None else sym, "to": dst}
            for src, sym, dst in sorted(bn.nfa.transitions,
                                        key=lambda t: (str(t[0]), str(t[1]), str(t[2])))
        ],
        "blocks": [
            {"label": regular.print_regex(b.label), "entry": b.entry, "exit": b.exit,
             "inner": sorted(b.inner)}
            for b in bn.blocks
        ],
    }


def cyk_rows_from_doc(rows, g: grammar.Cfg, word: str) -> grammar.CykTable:
    n = len(word)
    if not isinstance(rows, list) or len(rows) != n:
        raise InvalidAttempt(f"expected {n} rows, got "
                             f"{len(rows) if isinstance(rows, list) else type(rows).__name__}")
    cells: dict[tuple[int, int], frozenset[str]] = {}
    for length, row in enumerate(rows, start=1):
        expected = n - length + 1
        if not isinstance(row, list) or len(row) != expected:
            raise InvalidAttempt(f"row {length} must have {expected} cells")
        for i, cell in enumerate(row):
            if not isinstance(cell, list):
                raise InvalidAttempt(f"cell ({i}, {length}) must be a list of nonterminals")
            for nt in cell:
                if nt not in g.nonterminals:
                    raise InvalidAttempt(f"cell ({i}, {length}) names unknown symbol {nt!r}")
            cells[(i, length)] = frozenset(cell)
    return grammar.CykTable(word=word, cells=cells)


def cyk_table_to_doc(table: grammar.CykTable) -> dict:
    n = len(table.word)
    return {"rows": [[sorted(table.cell(i, length)) for i in range(n - length + 1)]
                     for length in range(1, n + 1)]}

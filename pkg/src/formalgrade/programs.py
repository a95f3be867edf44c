"""Bundled While base programs with reference multi-tape Turing machines.

The generator mutates these programs into new exercises; the reference
machines reproduce each program's input-output behaviour and double as
regression fixtures. Machines follow one discipline: results are unary blocks
and every head ends at the left edge of its block (or on a blank for zero).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .machines import MultiTapeTm, TmTransition, WhileProgram, parse_while


def build_tm(tapes: int, rules, initial: str, halting=("done",)) -> MultiTapeTm:
    """Expand wildcard rules into a deterministic transition table.

    Each rule is (state, read_pattern, next_state, write_pattern, moves);
    patterns are strings over {1,_,*} and writes over {1,_,=} ('=' keeps the
    symbol read). Earlier rules win on overlap.
    """
    table: dict[tuple[str, tuple[str, ...]], TmTransition] = {}
    states = set(halting) | {initial}
    for state, pattern, nxt, writes, moves in rules:
        states.update({state, nxt})
        options = [("1", "_") if p == "*" else (p,) for p in pattern]
        for read in itertools.product(*options):
            key = (state, read)
            if key in table:
                continue
            write = tuple(r if w == "=" else w for w, r in zip(writes, read))
            table[key] = TmTransition(state, read, nxt, write, tuple(moves))
    return MultiTapeTm(
        tape_count=tapes,
        states=frozenset(states),
        alphabet=frozenset({"1", "_"}),
        initial=initial,
        halting=frozenset(halting),
        transitions=tuple(table.values()),
    )


def _increment_tm() -> MultiTapeTm:
    return build_tm(1, [
        ("seek", "1", "seek", "1", "R"),
        ("seek", "_", "rew", "1", "L"),
        ("rew", "1", "rew", "1", "L"),
        ("rew", "_", "done", "_", "R"),
    ], initial="seek")


def _copy_tm() -> MultiTapeTm:
    # erase tape0, append a copy of tape1 after it, rewind both in lockstep
    return build_tm(2, [
        ("wipe", "1*", "wipe", "_=", "RS"),
        ("wipe", "_*", "copy", "==", "SS"),
        ("copy", "_1", "copy", "11", "RR"),
        ("copy", "__", "rew", "==", "LL"),
        ("rew", "11", "rew", "==", "LL"),
        ("rew", "__", "done", "==", "RR"),
    ], initial="wipe")


def _add_tm() -> MultiTapeTm:
    return build_tm(2, [
        ("seek", "1*", "seek", "==", "RS"),
        ("seek", "_*", "move", "==", "SS"),
        ("move", "_1", "move", "1_", "RR"),
        ("move", "__", "rew", "==", "LS"),
        ("rew", "1*", "rew", "==", "LS"),
        ("rew", "_*", "done", "==", "RS"),
    ], initial="seek")


def _monus_tm() -> MultiTapeTm:
    # consume matched 1s from the left of both tapes; tape0 keeps the surplus
    return build_tm(2, [
        ("loop", "11", "loop", "__", "RR"),
        ("loop", "_1", "loop", "__", "SR"),
        ("loop", "1_", "done", "==", "SS"),
        ("loop", "__", "done", "==", "SS"),
    ], initial="loop")


def _min_tm() -> MultiTapeTm:
    # keep the common prefix of tapes 0 and 1 on tape 0; clear tapes 1 and 2
    return build_tm(3, [
        ("wipe2", "**1", "wipe2", "==_", "SSR"),
        ("wipe2", "**_", "dispatch", "===", "SSS"),
        ("dispatch", "*1_", "scan", "===", "SSS"),
        ("dispatch", "*__", "drain0", "===", "SSS"),
        # x1 = 0: the minimum is 0, erase tape0 outright
        ("drain0", "1__", "drain0", "___", "RSS"),
        ("drain0", "___", "done", "===", "SSS"),
        # lockstep: keep tape0's 1, erase tape1's
        ("scan", "11_", "scan", "1__", "RRS"),
        ("scan", "_1_", "drain1", "===", "SSS"),   # min = x0; drain the rest of tape1
        ("scan", "1__", "drain0b", "===", "SSS"),  # min = x1 >= 1; erase tape0 extras
        ("scan", "___", "rew0", "===", "LSS"),     # x0 = x1, block flush left
        ("drain1", "_1_", "drain1", "___", "SRS"),
        ("drain1", "___", "rew0", "===", "LSS"),
        ("drain0b", "1__", "drain0b", "___", "RSS"),
        ("drain0b", "___", "skipgap", "===", "LSS"),
        ("skipgap", "___", "skipgap", "===", "LSS"),
        ("skipgap", "1__", "rew0", "===", "LSS"),
        ("rew0", "1**", "rew0", "===", "LSS"),
        ("rew0", "_**", "done", "===", "RSS"),
    ], initial="wipe2")


def _select_tm() -> MultiTapeTm:
    # tape2 nonzero: copy tape1 onto tape0; otherwise copy tape0 onto tape1
    return build_tm(3, [
        ("start", "**1", "wipeA", "===", "SSS"),
        ("start", "**_", "wipeB", "===", "SSS"),
        ("wipeA", "1**", "wipeA", "_==", "RSS"),
        ("wipeA", "_**", "copyA", "===", "SSS"),
        ("copyA", "_1*", "copyA", "11=", "RRS"),
        ("copyA", "__*", "rewA", "===", "LLS"),
        ("rewA", "11*", "rewA", "===", "LLS"),
        ("rewA", "__*", "done", "===", "RRS"),
        ("wipeB", "*1*", "wipeB", "=_=", "SRS"),
        ("wipeB", "*_*", "copyB", "===", "SSS"),
        ("copyB", "1_*", "copyB", "11=", "RRS"),
        ("copyB", "__*", "rewB", "===", "LLS"),
        ("rewB", "11*", "rewB", "===", "LLS"),
        ("rewB", "__*", "done", "===", "RRS"),
    ], initial="start")


def _double_tm() -> MultiTapeTm:
    # mirror tape0 onto tape1, then fold the mirror back as appended 1s
    return build_tm(2, [
        ("wipe1", "*1", "wipe1", "=_", "SR"),
        ("wipe1", "*_", "copy", "==", "SS"),
        ("copy", "1_", "copy", "11", "RR"),
        ("copy", "__", "back", "==", "SL"),
        ("back", "_1", "back", "1_", "RL"),
        ("back", "__", "rew", "==", "LS"),
        ("rew", "1*", "rew", "==", "LS"),
        ("rew", "_*", "done", "==", "RS"),
    ], initial="wipe1")


def _mult_tm() -> MultiTapeTm:
    # result grows on tape0 past its erased input; tape2 is rewound each round
    return build_tm(4, [
        ("wipe0", "1***", "wipe0", "_===", "RSSS"),
        ("wipe0", "_***", "wipe3", "====", "SSSS"),
        ("wipe3", "***1", "wipe3", "===_", "SSSR"),
        ("wipe3", "***_", "outer", "====", "SSSS"),
        ("outer", "*1**", "inner", "=_==", "SRSS"),
        ("outer", "*_**", "rew0", "====", "LSSS"),
        ("inner", "_*1*", "inner", "1=1=", "RSRS"),
        ("inner", "_*_*", "rew2", "====", "SSLS"),
        ("rew2", "**1*", "rew2", "====", "SSLS"),
        ("rew2", "**_*", "outer", "====", "SSRS"),
        ("rew0", "1***", "rew0", "====", "LSSS"),
        ("rew0", "_***", "done", "====", "RSSS"),
    ], initial="wipe0")


@dataclass(frozen=True)
class BaseProgram:
    name: str
    difficulty: int  # 1..10
    source: str
    reference_tm: MultiTapeTm

    @property
    def program(self) -> WhileProgram:
        return parse_while(self.source)


BASE_PROGRAMS: tuple[BaseProgram, ...] = (
    BaseProgram("increment", 1, "x0 := x0 + 1", _increment_tm()),
    BaseProgram("copy", 2, "x0 := x1 + 0", _copy_tm()),
    BaseProgram(
        "add", 3,
        "while x1 != 0 do x0 := x0 + 1; x1 := x1 - 1 end",
        _add_tm()),
    BaseProgram(
        "monus", 4,
        "while x1 != 0 do x0 := x0 - 1; x1 := x1 - 1 end",
        _monus_tm()),
    BaseProgram(
        "min", 5,
        "x2 := x0 + 0;\n"
        "while x1 != 0 do x1 := x1 - 1; x2 := x2 - 1 end;\n"
        "while x2 != 0 do x2 := x2 - 1; x0 := x0 - 1 end",
        _min_tm()),
    BaseProgram(
        "select", 5,
        "if x2 != 0 then x0 := x1 + 0 else x1 := x0 + 0 end",
        _select_tm()),
    BaseProgram(
        "double", 6,
        "x1 := x0 + 0;\n"
        "while x1 != 0 do x0 := x0 + 1; x1 := x1 - 1 end",
        _double_tm()),
    BaseProgram(
        "multiply", 9,
        "while x0 != 0 do x0 := x0 - 1 end;\n"
        "while x3 != 0 do x3 := x3 - 1 end;\n"
        "while x1 != 0 do\n"
        "  x1 := x1 - 1;\n"
        "  x3 := x2 + 0;\n"
        "  while x3 != 0 do x3 := x3 - 1; x0 := x0 + 1 end\n"
        "end",
        _mult_tm()),
)


def base_program(name: str) -> BaseProgram:
    for bp in BASE_PROGRAMS:
        if bp.name == name:
            return bp
    raise KeyError(name)

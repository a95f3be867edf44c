import random

import pytest

from formalgrade.errors import AlphabetError
from formalgrade.grammar import Cfg, enumerate_words, parse_cfg
from formalgrade.pda import (
    ACCEPTED,
    CUTOFF,
    REJECTED,
    Pda,
    PdaTransition,
    pda_accepts,
    pda_enumerate,
    pda_from_doc,
    pda_to_doc,
    pda_trace,
    step_cap_for,
)

from .oracles import cfg_language, words_over


def balanced_pda() -> Pda:
    """a pushes, b pops; accepts balanced words by empty stack."""
    q = "q"
    return Pda(
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
    )


def cfg_to_pda(g: Cfg) -> Pda:
    """Standard single-state construction; test-only helper."""
    q = "q"
    stack_alpha = frozenset(g.nonterminals | g.terminals)
    transitions = [PdaTransition(q, None, p.head, q, p.body) for p in g.productions]
    transitions += [PdaTransition(q, t, t, q, ()) for t in sorted(g.terminals)]
    return Pda(
        states=frozenset({q}),
        input_alphabet=frozenset(g.terminals),
        stack_alphabet=stack_alpha,
        initial=q,
        initial_stack=g.start,
        acceptance="empty",
        accepting=frozenset(),
        transitions=tuple(transitions),
    )


def eps_loop_pda() -> Pda:
    return Pda(
        states=frozenset({"q"}),
        input_alphabet=frozenset("a"),
        stack_alphabet=frozenset("Z"),
        initial="q",
        initial_stack="Z",
        acceptance="final",
        accepting=frozenset(),
        transitions=(PdaTransition("q", None, "Z", "q", ("Z", "Z")),),
    )


# ---------------------------------------------------------------------------
# acceptance


def test_balanced_accepts_ab():
    # hand trace: (q, ab, Z) -a-> (q, b, XZ) -b-> (q, "", Z) -eps-> (q, "", "")
    assert pda_accepts(balanced_pda(), "ab", 100) == ACCEPTED


def test_balanced_rejects_ba():
    assert pda_accepts(balanced_pda(), "ba", 100) == REJECTED


def test_empty_word_accepted():
    assert pda_accepts(balanced_pda(), "", 100) == ACCEPTED


def test_balanced_against_grammar_oracle():
    g = parse_cfg("S -> SS | aSb | eps")
    oracle = cfg_language(g.by_head(), "S", g.nonterminals, 6)
    p = balanced_pda()
    for w in words_over("ab", 6):
        want = ACCEPTED if w in oracle else REJECTED
        assert pda_accepts(p, w, step_cap_for(w)) == want, w


def test_alphabet_error():
    with pytest.raises(AlphabetError):
        pda_accepts(balanced_pda(), "ac", 100)


def test_eps_loop_cuts_off():
    assert pda_accepts(eps_loop_pda(), "", 10) == CUTOFF


def test_acceptance_monotone_in_step_cap():
    p = cfg_to_pda(parse_cfg("S -> aSb | eps | SS"))
    for w in ["", "ab", "aabb", "abab", "ba", "aab"]:
        for cap in [1, 2, 5, 10, 50, 200, 1000]:
            if pda_accepts(p, w, cap) == ACCEPTED:
                assert all(pda_accepts(p, w, c) == ACCEPTED for c in [cap + 1, cap * 2, 5000])
                break


def test_final_state_mode():
    p = Pda(
        states=frozenset({"s", "f"}),
        input_alphabet=frozenset("a"),
        stack_alphabet=frozenset("Z"),
        initial="s",
        initial_stack="Z",
        acceptance="final",
        accepting=frozenset({"f"}),
        transitions=(PdaTransition("s", "a", "Z", "f", ("Z",)),),
    )
    assert pda_accepts(p, "a", 100) == ACCEPTED
    assert pda_accepts(p, "", 100) == REJECTED
    assert pda_accepts(p, "aa", 100) == REJECTED


# ---------------------------------------------------------------------------
# tracing


def test_trace_accepting_run_ends_accepting():
    run = pda_trace(balanced_pda(), "ab", 100)
    assert run.verdict == ACCEPTED
    last = run.steps[-1]
    assert last.remaining == "" and last.stack == ()
    assert run.steps[0].state == "q" and run.steps[0].remaining == "ab"
    assert run.steps[0].stack == ("Z",)


def test_trace_rejected_has_verdict():
    run = pda_trace(balanced_pda(), "ba", 100)
    assert run.verdict == REJECTED
    assert not (run.steps[-1].remaining == "" and run.steps[-1].stack == ())


def test_trace_cutoff():
    run = pda_trace(eps_loop_pda(), "", 10)
    assert run.verdict == CUTOFF


def test_trace_is_replayable():
    p = cfg_to_pda(parse_cfg("S -> aSb | eps"))
    for w in ["", "ab", "aabb", "ba"]:
        run = pda_trace(p, w, step_cap_for(w))
        for before, after in zip(run.steps, run.steps[1:]):
            assert _connected(p, before, after), (w, before, after)


def _connected(p: Pda, before, after) -> bool:
    for t in p.transitions:
        if t.source != before.state or t.target != after.state:
            continue
        stack = tuple(reversed(before.stack))
        if not stack or stack[0] != t.pop:
            continue
        if t.read is None:
            if after.remaining != before.remaining:
                continue
        else:
            if not before.remaining or before.remaining[0] != t.read:
                continue
            if after.remaining != before.remaining[1:]:
                continue
        if t.push + stack[1:] == tuple(reversed(after.stack)):
            return True
    return False


# ---------------------------------------------------------------------------
# enumeration


def test_enumerate_balanced():
    got = pda_enumerate(balanced_pda(), budget=10.0, max_len=6)
    g = parse_cfg("S -> SS | aSb | eps")
    assert got.lengths_completed == 6
    assert got.words == cfg_language(g.by_head(), "S", g.nonterminals, 6)


def test_enumerate_empty_pda():
    p = Pda(states=frozenset({"s"}), input_alphabet=frozenset("a"),
            stack_alphabet=frozenset("Z"), initial="s", initial_stack="Z",
            acceptance="final", accepting=frozenset(), transitions=())
    got = pda_enumerate(p, budget=2.0, max_len=4)
    assert got.words == frozenset()


def test_enumerate_single_word_machine():
    p = Pda(states=frozenset({"s", "f"}), input_alphabet=frozenset("a"),
            stack_alphabet=frozenset("Z"), initial="s", initial_stack="Z",
            acceptance="final", accepting=frozenset({"f"}),
            transitions=(PdaTransition("s", "a", "Z", "f", ("Z",)),))
    got = pda_enumerate(p, budget=2.0, max_len=4)
    assert got.words == frozenset({"a"})


def random_grammar(rng: random.Random) -> Cfg:
    # terminal-first bodies: the single-state PDA then consumes input promptly,
    # which keeps the 200·(|w|+1) step cap comfortable (left-recursive spines
    # explode the ε-frontier and legitimately cut off)
    from formalgrade.grammar import Production
    nts = ["S", "A", "B"][: rng.randint(1, 3)]
    ts = ["a", "b"]
    prods = []
    for _ in range(rng.randint(2, 6)):
        head = rng.choice(nts)
        if rng.random() < 0.25:
            body: tuple = ()
        else:
            body = (rng.choice(ts),) + tuple(
                rng.choice(nts + ts) for _ in range(rng.randint(0, 2)))
        prods.append(Production(head, body))
    return Cfg(frozenset(nts), frozenset(ts), "S", tuple(dict.fromkeys(prods)))


def test_enumerate_agrees_with_grammar_enumeration_on_random_pdas():
    from formalgrade.errors import EmptyLanguageError
    from formalgrade.grammar import sanitize

    rng = random.Random(5)
    checked = 0
    while checked < 50:
        g = random_grammar(rng)
        try:
            g = sanitize(g)
        except EmptyLanguageError:
            continue
        p = cfg_to_pda(g)
        from_grammar = enumerate_words(g, budget=10.0, max_len=5)
        from_pda = pda_enumerate(p, budget=10.0, max_len=5)
        joint = min(from_grammar.lengths_completed, from_pda.lengths_completed)
        assert joint == 5
        assert {w for w in from_grammar.words if len(w) <= joint} == \
               {w for w in from_pda.words if len(w) <= joint}, print(g)
        checked += 1


# ---------------------------------------------------------------------------
# documents


def test_doc_round_trip():
    p = balanced_pda()
    assert pda_from_doc(pda_to_doc(p)) == p


def test_doc_eps_read_and_empty_push():
    doc = pda_to_doc(balanced_pda())
    reads = {t["read"] for t in doc["transitions"]}
    pushes = {t["push"] for t in doc["transitions"]}
    assert "eps" in reads
    assert "" in pushes


def test_malformed_doc():
    with pytest.raises(ValueError):
        pda_from_doc({"states": ["q"]})

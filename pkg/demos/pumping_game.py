"""Two scripted pumping-lemma games against the tutor.

First a student wrongly claims that { a^i b^j | i < j } is regular and loses;
then a student plays the non-regularity side correctly and wins.
"""

from formalgrade.pumping import (
    SAMPLE_LANGUAGES,
    GameState,
    arith_member,
    game_transcript,
    pumping_game_step,
)

payload = SAMPLE_LANGUAGES["fewer-as-than-bs"]

print("== wrong claim: regular")
state = pumping_game_step(payload, GameState(), {"kind": "claim", "claim": "regular"})
state = pumping_game_step(payload, state, {"kind": "n", "n": 3})
print(f"tutor answers with the word {state.w!r}")
state = pumping_game_step(payload, state,
                          {"kind": "split", "x": "", "y": "a", "z": state.w[1:]})
for line in game_transcript(payload, state):
    print("  " + line)

print("\n== right claim: nonregular")
state = pumping_game_step(payload, GameState(), {"kind": "claim", "claim": "nonregular"})
print(f"tutor fixes the bound n = {state.n}")
word = "a" * state.n + "b" * (state.n + 1)
state = pumping_game_step(payload, state, {"kind": "word", "word": word})
x, y, z = state.split
print(f"tutor splits x={x!r} y={y!r} z={z!r}")
winning_i = next(i for i in range(state.n + 3)
                 if not arith_member(payload["lang"], x + y * i + z))
state = pumping_game_step(payload, state, {"kind": "i", "i": winning_i})
for line in game_transcript(payload, state):
    print("  " + line)

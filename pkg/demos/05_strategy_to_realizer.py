"""Completeness: a winning strategy becomes a realizer.

A handwritten winning strategy for the backtracking game is translated
into a learning strategy over numeral play codes: the optimality
operator iterates recorded play improvements, a learning map mines new
improvement facts from lost plays, and the assembled realizer consults
these through state-indexed constants."""

from realizability.corpus import em1_item
from realizability.games import (
    HandwrittenEM1Omega, Play, learning_strategy_from_winning,
    strategy_to_realizer,
)
from realizability.realizer import realizes_bounded
from realizability.states import EMPTY, cup, state
from realizability.syntax import print_state, print_term

item = em1_item()
omega = HandwrittenEM1Omega(item.sig)
pipeline = learning_strategy_from_winning(omega, item.formula, item.sig)
codec = pipeline.codec

or_play = Play(item.formula, (2,))
print("strategy choice at the disjunction, empty state:",
      "left" if pipeline.omega0_bool(EMPTY, codec.encode_play(or_play)) else "right")

lost = Play(item.formula, (2, "right", 3))
learned = pipeline.omega1(EMPTY, codec.encode_play(lost))
print("after one lost play the learning map emits",
      len(learned.atoms), "improvement fact(s)")

s1 = cup(EMPTY, learned)
print("choice at the enlarged state:",
      "left" if pipeline.omega0_bool(s1, codec.encode_play(or_play)) else "right")
print("witness now offered:",
      pipeline.omega0_nat(s1, codec.encode_play(Play(item.formula, (2, "left")))))

t = strategy_to_realizer(pipeline)
print("\nassembled realizer:", print_term(t.term)[:120], "...")
for s in (EMPTY, state(("P", (2,), 3))):
    verdict = realizes_bounded(t, item.formula, s, bound=6)
    print(f"checker at state {print_state(s)}: {verdict.kind}")

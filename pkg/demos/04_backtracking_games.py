"""The backtracking game, played by a realizer.

Eloise defends the excluded-middle instance: she first predicts the
universal side (her state knows nothing), loses the atom against a true
instance, learns it, retracts to the disjunction and wins through the
existential side.  The same machinery then plays the minimum-principle
game against an adversarial opponent, with the number of retractions
bounded by f(0)."""

import random

from realizability.corpus import em1_item, minimum_item
from realizability.games import (
    RandomAbelard, RealizerEloise, ScriptedAbelard, SpoilerAbelard, run_1back,
)

item = em1_item()
out = run_1back(item.formula, RealizerEloise(item.realizer),
                ScriptedAbelard([2, 3]), item.sig)
print("excluded-middle game, opponent plays 2 then 3:")
for r in out.records:
    extra = f" -> prefix {r.backtrack_to}" if r.kind == "backtrack" else ""
    print(f"  {r.index}: {r.player:7s} {r.kind}{extra:14s} {r.position}"
          f"   state {r.state}")
print("winner:", out.winner, "| backtracks:", out.eloise_backtracks)

rng = random.Random(7)
wins = sum(run_1back(item.formula, RealizerEloise(item.realizer),
                     RandomAbelard(rng, bound=9), item.sig).winner == "eloise"
           for _ in range(200))
print(f"\nagainst a random opponent: {wins}/200 wins")

b = 6
minimum = minimum_item({x: max(b - x, 0) for x in range(b + 1)})
out = run_1back(minimum.formula, RealizerEloise(minimum.realizer),
                SpoilerAbelard(scan=20), minimum.sig)
minima = [p.moves[0] for p in out.bplay if len(p.moves) == 1]
dedup = [m for i, m in enumerate(minima) if i == 0 or minima[i - 1] != m]
print(f"\nminimum principle with f(0) = {b}: candidates {dedup}")
print("backtracks:", out.eloise_backtracks, "<= f(0) =", b,
      "| winner:", out.winner)

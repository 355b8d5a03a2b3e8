"""From a classical proof to a self-correcting program.

The bundled derivation proves that every function over the naturals has
a point where it does not drop under a shift: a classical argument via
the minimum principle, using excluded middle on the semidecidable
question "does f go below y somewhere?".  Extraction turns it into a
program whose witness is read off after a short learning dialogue.
"""

from realizability.corpus import (
    brute_force_shift_witness, coquand_item, minimum_item, staircase,
)
from realizability.logic import print_formula
from realizability.realizer import extract_witness, realizes_bounded
from realizability.states import EMPTY
from realizability.syntax import print_state, print_term

table = staircase(4)  # f = 4, 3, 2, 1, 0, 0, ...
f = lambda x: table.get(x, 0)

minimum = minimum_item(table)
print("minimum principle:", print_formula(minimum.formula))
print("its realizer type-checks; checker verdict at the empty state:",
      realizes_bounded(minimum.realizer, minimum.formula, EMPTY, bound=6).kind)

coquand = coquand_item(table)
print("\nshift comparison:", print_formula(coquand.formula))
print("extracted realizer (abridged):",
      print_term(coquand.realizer.term)[:100], "...")

out = extract_witness(coquand.realizer, coquand.formula, 1)
print("\nshift a = 1:")
print("  witness x =", out.witness, " with f(x) <= f(x+1):",
      f(out.witness), "<=", f(out.witness + 1))
print("  naive scan agrees:", brute_force_shift_witness(f, 1))
print("  learned state:", print_state(out.zero_state))
print("  learning steps:", out.steps)

# On staircases whose drops match the shift, the program's answer equals
# the naive scan; on other shapes its internal bookkeeping may walk past
# the first admissible point, but the output is still a correct witness.
out2 = extract_witness(coquand.realizer, coquand.formula, 2)
print("\nshift a = 2 (drops of the staircase no longer match the shift):")
print("  witness x =", out2.witness, " with f(x) <= f(x+2):",
      f(out2.witness), "<=", f(out2.witness + 2))
print("  naive scan would stop at:", brute_force_shift_witness(f, 2))

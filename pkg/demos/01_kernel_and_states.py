"""Kernel walkthrough: typed terms, reduction, and knowledge states.

The calculus is simply typed lambda calculus with numerals, booleans,
conditionals and primitive recursion, extended with an atomic type of
knowledge states.  A state is a finite consistent stock of verified
witnesses; the constants chi/phi/add query and extend it.
"""

from realizability.kernel import (
    App, Const, If, Lam, NAT, Rec, Succ, Var, evaluate, normalize, numeral,
    step, typecheck,
)
from realizability.states import (
    EMPTY, LearningSignature, PredicateSig, cup, learn_rule_step, state,
)
from realizability.syntax import parse_term, print_state, print_term

double = Lam("x", NAT, Const("add")(Var("x", NAT), Var("x", NAT)))
print("the doubling function:", print_term(double))
print("its type:", typecheck(double))

applied = App(double, numeral(4))
print("\none leftmost-outermost step:", print_term(step(applied)))
print("normal form:", print_term(normalize(applied)))

plus = Lam("n", NAT, Lam("r", NAT, Succ(Var("r", NAT))))
rec = Rec(NAT)(numeral(3), plus, numeral(2))
print("\nrecursion 3 + 2 by unfolding:", print_term(normalize(rec)))
print("fast evaluation agrees:", evaluate(rec))

print("\n-- knowledge states ------------------------------------------")
sig = LearningSignature()
sig.register_predicate(PredicateSig("P", 1, fn=lambda x, y: y == x * x))

s1 = state(("P", (2,), 4))
s2 = state(("P", (2,), 9), ("P", (3,), 9))  # the first atom conflicts
print("left-biased merge keeps the left witness:")
print(" ", print_state(s1), "cup", print_state(s2), "=", print_state(cup(s1, s2)))

query = Const("chi_P")(parse_term("(state {(P 2 4)})"), numeral(2))
print("chi_P asks 'is a witness recorded?':", print_term(learn_rule_step(query, sig)))

probe = Const("add_P")(parse_term("(state {})"), numeral(3), numeral(9))
print("add_P verifies and records a fresh witness:",
      print_term(learn_rule_step(probe, sig)))
wrong = Const("add_P")(parse_term("(state {})"), numeral(3), numeral(7))
print("false claims are rejected (empty update):",
      print_term(learn_rule_step(wrong, sig)))

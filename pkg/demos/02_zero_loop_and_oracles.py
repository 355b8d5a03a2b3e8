"""Oracles and the learning loop.

A term may mention ideal constants Chi_P (does a witness exist?) and
Phi_P (produce one); approximating at a state replaces them by the
computable queries against that state.  Iterating
``s <- s cup nf(t[s])`` on a state-typed term drives all learning and
provably terminates with a state where the term has nothing to add.
"""

from realizability.kernel import Const, numeral
from realizability.oracle import (
    OracleTerm, WIChain, approximate, export_trace, stabilization_index,
    zero_loop,
)
from realizability.states import EMPTY, LearningSignature, PredicateSig
from realizability.syntax import print_term

sig = LearningSignature()
sig.register_predicate(PredicateSig("P", 1, fn=lambda x, y: y == x + 10))

ideal = OracleTerm(Const("Chi_P")(numeral(5)), sig)
print("ideal question:", print_term(ideal.term))
print("approximation at the empty state:", print_term(approximate(ideal, EMPTY)))

learner = OracleTerm(Const("Add_P")(numeral(5), numeral(15)), sig)
result = zero_loop(learner)
print("\nzero loop on the self-verifying update term:")
print(export_trace(result), end="")
print("zero state:", result.zero_state.atoms)

chain = WIChain.from_trace(result.trace)
watched = OracleTerm(Const("Phi_P")(numeral(5)), sig)
idx = stabilization_index(watched, chain, horizon=8)
print("\nPhi_P 5 stabilizes along the loop's own chain at index", idx)

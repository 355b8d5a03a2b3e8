"""Moduli of convergence and the bound they put on learning.

A modulus hands out, for every inflationary h, intervals on which a
converging sequence is constant.  Moduli compose (join serves two
sequences at once; the merge operator threads a family through a
selector), and the moduli-carrying interpretation assigns one to every
term over the function oracle.  Interpreting a state-valued term over
its own learning chain bounds the chain index where learning stops."""

from realizability.convergence import (
    PHI, FunChain, interpret, join, modulus_report, modulus_rows,
    zero_via_moduli_report,
)
from realizability.corpus import coquand_item, staircase
from realizability.kernel import App, Const, Lam, NAT, Proj, numeral
from realizability.oracle import OracleTerm
from realizability.states import LearningSignature, PredicateSig
from realizability.syntax import print_state


def exact_modulus(f, cap=100):
    def modulus(h):
        def at(z):
            start = z
            while True:
                if all(f(m) == f(start) for m in range(start, h(start) + 1)):
                    return start
                start += 1
                assert start < cap
        return at
    return modulus


f1 = lambda m: min(m, 3)
f2 = lambda m: min(2 * m, 10)
j = join(exact_modulus(f1), exact_modulus(f2))
h = lambda m: m + 2
start = j(h)(0)
print(f"joint modulus: both sequences constant on [{start}, {h(start)}]")
print("  f1 there:", [f1(m) for m in range(start, h(start) + 1)])
print("  f2 there:", [f2(m) for m in range(start, h(start) + 1)])

print("\n-- interpreting a term over the oracle -----------------------")
sig = LearningSignature()
sig.register(PHI, NAT >> NAT)
chain = FunChain(lambda i: (lambda n: (2 if i >= 2 else 0) if n == 3 else 0))
t = App(Const(PHI), numeral(3))
rows = modulus_rows(t, chain, sig, zs=range(0, 6))
print(modulus_report(rows))

print("-- the moduli-driven zero finder ------------------------------")
table = staircase(3)
item = coquand_item(table)
fam = Lam("i", NAT, Proj(1, App(item.realizer.term, numeral(1))))
out = zero_via_moduli_report(OracleTerm(fam, item.sig), 0)
print("modulus bound on the learning index:", out.index)
print("state reached:", print_state(out.state))

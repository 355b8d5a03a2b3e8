"""The epsilon substitution repair process.

Choice terms denote least witnesses; a substitution assigns candidate
values, defaulting to zero.  Each false critical formula teaches the
least witness for its choice term; the repair process is the learning
process of the induced update procedure and ends with every critical
formula true."""

from realizability.epsilon import (
    Critical, CriticalZero, EEps, ENum, EPred, ESucc, EVar, eps_normalize,
    formula_truth, h_process,
)

body = EPred("eq", (EVar("x"), ENum(4)))          # A(x): x = 4
crit = Critical(body, "x", ENum(4))               # A(4) -> A(eps x A)
print("critical formula: A(4) -> A(eps x A)  with A(x): x = 4")

out = h_process([crit])
eps = EEps("x", body)
print("repair steps:", out.run.steps)
print("learned value for the choice term:", out.substitution.value(eps))
print("critical now true:",
      formula_truth(eps_normalize(crit.formula(), out.substitution)))

print("\n-- nested choice terms ----------------------------------------")
inner_body = EPred("eq", (EVar("x"), ENum(2)))
inner = EEps("x", inner_body)
outer_body = EPred("eq", (EVar("y"), ESucc(inner)))
out2 = h_process([Critical(outer_body, "y", ESucc(inner)),
                  Critical(inner_body, "x", ENum(2))])
print("assignments:")
for e, v in out2.substitution.items():
    print("  ", e, "->", v)
print("repair steps (with one collapse and relearning):", out2.run.steps)

print("\n-- an existential witness -------------------------------------")
exists_body = EPred("le", (ENum(6), EVar("x")))   # P(x): 6 <= x
out3 = h_process([Critical(exists_body, "x", ENum(9))])
print("witness for 'some x with 6 <= x':",
      out3.substitution.value(EEps("x", exists_body)), "(the least one)")

print("\n-- the zero-successor form ------------------------------------")
out4 = h_process([CriticalZero(ENum(4))])
pred = EEps("x", EPred("eq", (ENum(4), ESucc(EVar("x")))))
print("predecessor of 4 learned:", out4.substitution.value(pred))

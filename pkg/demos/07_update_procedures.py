"""Transfinite update procedures and their two zero finders.

A procedure demands corrections to an ordinal-indexed family, each
justified only by lower levels.  The learning process applies them with
the house-of-cards collapse; the bar-recursive finder instead grows a
finite approximation, solving each element by a nested call one ordinal
power below.  Both end in families the procedure accepts."""

from realizability.update import (
    Demand, OmegaPow, OmegaTimes2, export_learning_trace, learning_process,
    scripted_procedure, validate_update_procedure, zero_br,
)

print("-- a two-layer procedure at omega*2 ---------------------------")
proc = scripted_procedure(OmegaTimes2(), [
    Demand((0, 0), 0, 2),
    Demand((1, 0), 0, ("+", 1, ("at", (0, 0), 0))),
    Demand((0, 0), 1, 4),   # arrives later and collapses the upper layer
], "two-layer")
run = learning_process(proc)
print(export_learning_trace(run), end="")
print("zero family:", run.zero.support())
print("condition probe violations:", validate_update_procedure(proc, probes=300))

print("\n-- bar recursion at omega^2 -----------------------------------")
proc2 = scripted_procedure(OmegaPow(2), [
    Demand((0, 0), 0, 2),
    Demand((0, 1), 1, ("+", 1, ("at", (0, 0), 0))),
    Demand((1, 0), 0, ("+", ("at", (0, 1), 1), ("at", (0, 0), 0))),
], "omega2")
f = zero_br(proc2)
print("bar-recursive zero:", f.support())
print("accepted:", proc2(f) is None)
run2 = learning_process(proc2)
print("learning-process zero:", run2.zero.support())

"""Knowledge states: consistent union, learning rules, invariants."""

import random

import pytest

from realizability.kernel import (
    BOOL, Const, MalformedApplication, StateConst, Var, arrows, NAT, Lam,
    numeral,
)
from realizability.states import (
    EMPTY, KnowledgeState, LearningSignature, PredicateSig, cup, cup_many,
    learn_rule_step, leq_state, state, states_consistent, states_disjoint,
)
from realizability.syntax import parse_state, print_state


def make_sig():
    sig = LearningSignature()
    # P(n, m): m = n + 1, as a kernel term
    body = Lam("n", NAT, Lam("m", NAT,
               Const("eq")(Var("m", NAT), Const("add")(Var("n", NAT), numeral(1)))))
    sig.register_predicate(PredicateSig("P", 1, body=body))
    sig.register_predicate(PredicateSig("Q", 1, fn=lambda n, m: m == 2 * n))
    return sig


def test_cup_neutral_element():
    s = state(("P", (3,), 5))
    assert cup(EMPTY, s) == s
    assert cup(s, EMPTY) == s


def test_cup_keeps_left_atom_on_conflict():
    s1 = state(("P", (3,), 5))
    s2 = state(("P", (3,), 7))
    assert cup(s1, s2) == s1
    assert cup(s2, s1) == s2


def test_cup_disjoint_predicates():
    s1 = state(("P", (1,), 2))
    s2 = state(("Q", (1,), 2))
    assert cup(s1, s2) == state(("P", (1,), 2), ("Q", (1,), 2))


def random_state(rng):
    atoms = []
    for _ in range(rng.randrange(4)):
        pred = rng.choice("PQR")
        args = (rng.randrange(4),)
        atoms.append((pred, args, rng.randrange(4)))
    out = EMPTY
    for a in atoms:
        out = cup(out, state(a))  # cup keeps the state consistent
    return out


def test_cup_associative_with_neutral_on_random_triples():
    rng = random.Random(3)
    for _ in range(200):
        a, b, c = (random_state(rng) for _ in range(3))
        assert cup(cup(a, b), c) == cup(a, cup(b, c))
        assert cup(a, EMPTY) == a
        assert cup(EMPTY, a) == a


def test_cup_of_nonempty_is_nonempty():
    rng = random.Random(5)
    for _ in range(200):
        parts = [random_state(rng) for _ in range(rng.randrange(1, 5))]
        if any(parts):
            assert cup_many(parts)
        else:
            assert not cup_many(parts)


def test_consistency_lemma_on_random_states():
    rng = random.Random(7)
    for _ in range(200):
        s, s1, s2 = (random_state(rng) for _ in range(3))
        if states_consistent(s, s1) and states_consistent(s, s2):
            assert states_consistent(s, cup(s1, s2))
        if states_disjoint(s, s1) and states_disjoint(s, s2):
            assert states_disjoint(s, cup(s1, s2))


def test_leq_state():
    s1 = state(("P", (3,), 5))
    s2 = state(("P", (3,), 5), ("Q", (0,), 1))
    assert leq_state(EMPTY, s2)
    assert leq_state(s1, s2)
    assert not leq_state(s1, state(("P", (3,), 7)))


def test_atom_constructor_rejects_false_instances():
    sig = make_sig()
    assert sig.make_atom("P", (3,), 4).witness == 4
    with pytest.raises(ValueError):
        sig.make_atom("P", (3,), 5)
    assert sig.make_atom("Q", (3,), 6)
    with pytest.raises(ValueError):
        sig.make_atom("Q", (3,), 5)


def test_inconsistent_state_rejected():
    with pytest.raises(ValueError):
        KnowledgeState((state(("P", (3,), 5)).atoms[0],
                        state(("P", (3,), 7)).atoms[0]))


def test_learn_rule_chi():
    sig = make_sig()
    s = state(("P", (3,), 5))
    t = Const("chi_P")(StateConst(s), numeral(3))
    from realizability.kernel import TRUE, FALSE
    assert learn_rule_step(t, sig) == TRUE
    t2 = Const("chi_P")(StateConst(s), numeral(4))
    assert learn_rule_step(t2, sig) == FALSE


def test_learn_rule_phi():
    sig = make_sig()
    s = state(("P", (3,), 5))
    assert learn_rule_step(Const("phi_P")(StateConst(s), numeral(3)), sig) == numeral(5)
    assert learn_rule_step(Const("phi_P")(StateConst(s), numeral(9)), sig) == numeral(0)


def test_learn_rule_add():
    sig = make_sig()
    # adding a fresh true atom
    t = Const("add_P")(StateConst(EMPTY), numeral(3), numeral(4))
    assert learn_rule_step(t, sig) == StateConst(state(("P", (3,), 4)))
    # existing atom for the same args: empty update
    s = state(("P", (3,), 4))
    t2 = Const("add_P")(StateConst(s), numeral(3), numeral(9))
    assert learn_rule_step(t2, sig) == StateConst(EMPTY)
    # false instance: empty update
    t3 = Const("add_P")(StateConst(EMPTY), numeral(3), numeral(9))
    assert learn_rule_step(t3, sig) == StateConst(EMPTY)


def test_learn_rule_cup():
    sig = make_sig()
    s1, s2 = state(("P", (3,), 5)), state(("P", (3,), 7), ("Q", (1,), 2))
    t = Const("cup")(StateConst(s1), StateConst(s2))
    assert learn_rule_step(t, sig) == StateConst(state(("P", (3,), 5), ("Q", (1,), 2)))


def test_learn_rule_step_rejects_malformed():
    sig = make_sig()
    with pytest.raises(MalformedApplication):
        learn_rule_step(Const("chi_P")(StateConst(EMPTY)), sig)  # missing arg
    with pytest.raises(MalformedApplication):
        learn_rule_step(numeral(3), sig)


def test_state_literal_round_trip():
    src = "{(P 3 5) (Q 0 1)}"
    s = parse_state(src)
    assert s == state(("P", (3,), 5), ("Q", (0,), 1))
    assert parse_state(print_state(s)) == s
    assert print_state(EMPTY) == "{}"


def test_state_printing_is_canonically_ordered():
    s1 = state(("Q", (0,), 1), ("P", (3,), 5))
    s2 = state(("P", (3,), 5), ("Q", (0,), 1))
    assert print_state(s1) == print_state(s2)

"""Update procedures, learning processes, bar recursion, epsilon repair."""

import random

import pytest

from realizability.epsilon import (
    Critical, CriticalZero, EAnd, EEps, EImp, ENot, ENum, EPred, ESucc, EVar,
    EpsSubstitution, MalformedCritical, critical_update_procedure,
    eps_normalize, formula_truth, h_process, parse_criticals,
)
from realizability.kernel import (
    App, Const, If, Lam, NAT, Var, arrows, numeral,
)
from realizability.states import LearningSignature
from realizability.update import (
    Demand, Family, FiniteOrd, OmegaPow, OmegaTimes2, UpdateProcedure,
    decode_update, export_learning_trace, family_oplus_flat,
    install_update_coding, kernel_update_procedure, learning_process,
    level_project, oplus_flat, oplus_transfinite, parse_procedure,
    scripted_procedure, validate_update_procedure, zero_br, zero_family,
)


def unary_demand_proc(n=3, m=5):
    """U(f) = empty if f(n) = m else demand (0, n, m)."""
    space = FiniteOrd(1)
    return scripted_procedure(space, [Demand((0,), n, m)], "unary")


# -- the update operators -----------------------------------------------------

def test_oplus_flat_overwrite():
    f = lambda x: 0
    g = oplus_flat(f, (3, 5))
    assert g(3) == 5
    assert g(4) == 0


def test_oplus_flat_empty_is_identity():
    f = lambda x: x + 1
    assert oplus_flat(f, None) is f


def test_oplus_flat_idempotent():
    f = lambda x: 2 * x
    g1 = oplus_flat(f, (3, 5))
    g2 = oplus_flat(g1, (3, 5))
    for x in range(51):
        assert g1(x) == g2(x)


def test_oplus_transfinite_zeroes_higher_levels():
    space = OmegaTimes2()
    f = zero_family(space).with_value((0, 0), 1, 7).with_value((1, 2), 0, 9)
    out = oplus_transfinite(f, ((0, 0), 5, 4))
    assert out.get((0, 0), 1) == 7      # same level, other point: kept
    assert out.get((0, 0), 5) == 4      # the update itself
    assert out.get((1, 2), 0) == 0      # higher level collapsed


def test_oplus_transfinite_empty_is_identity():
    space = OmegaPow(1)
    f = zero_family(space).with_value((2,), 1, 3)
    assert oplus_transfinite(f, None) == f


def test_oplus_transfinite_top_level_keeps_lower():
    space = OmegaPow(1)
    f = zero_family(space).with_value((0,), 0, 1).with_value((1,), 0, 2)
    out = oplus_transfinite(f, ((2,), 0, 9))
    assert out.get((0,), 0) == 1 and out.get((1,), 0) == 2


# -- learning processes -------------------------------------------------------

def test_learning_process_single_demand():
    run = learning_process(unary_demand_proc())
    assert run.steps == 1
    assert run.zero.get((0,), 3) == 5
    assert run.trace == [((0,), 3, 5)]


def test_learning_process_empty_procedure():
    proc = UpdateProcedure(FiniteOrd(1), lambda f: None, "empty")
    run = learning_process(proc)
    assert run.steps == 0
    assert not run.zero


def test_learning_process_two_layer_collapse():
    # a level-(0,n) update invalidates the level-(1,n) layer: the trace
    # shows the collapse and the relearning of the higher level
    space = OmegaTimes2()
    demands = [
        Demand((0, 0), 0, 2),
        Demand((1, 0), 0, ("+", 1, ("at", (0, 0), 0))),
        Demand((0, 0), 1, 4),   # demanded later: collapses level one again
    ]
    # reorder so the collapse is visible: satisfy level one, then a fresh
    # level-zero demand arrives
    proc = scripted_procedure(space, [demands[0], demands[1], demands[2]], "layers")
    run = learning_process(proc)
    assert run.zero.get((0, 0), 0) == 2
    assert run.zero.get((0, 0), 1) == 4
    assert run.zero.get((1, 0), 0) == 3
    # the third update (level zero) must erase the level-one value, which
    # is then relearned: (1,0) appears twice in the trace
    ups = [u[0] for u in run.trace]
    assert ups.count((1, 0)) == 2
    assert run.steps == 4


def test_flat_unary_traces_weakly_increasing():
    rng = random.Random(5)
    for _ in range(20):
        demands = []
        used = set()
        for _k in range(rng.randrange(1, 5)):
            n = rng.randrange(5)
            if n in used:
                continue
            used.add(n)
            demands.append(Demand((0,), n, rng.randrange(1, 5)))
        proc = scripted_procedure(FiniteOrd(1), demands, "rand")
        run = learning_process(proc, mode="flat")
        for f1, f2 in zip(run.families, run.families[1:]):
            for (code, n), m in f1.values:
                assert m == 0 or f2.get(code, n) == m


# -- validation ---------------------------------------------------------------

def test_validator_accepts_scripted_procedures():
    space = OmegaTimes2()
    proc = scripted_procedure(space, [
        Demand((0, 0), 0, 2),
        Demand((0, 1), 0, ("+", 1, ("at", (0, 0), 0))),
        Demand((1, 0), 0, ("*", 2, ("at", (0, 1), 0))),
    ])
    assert validate_update_procedure(proc, probes=500) == 0


def test_validator_catches_recontradiction():
    # a procedure that re-demands a slot it has already verified
    space = FiniteOrd(1)

    def bad(f: Family):
        if f.get((0,), 0) != 1:
            return ((0,), 0, 1)
        return ((0,), 0, 2)  # contradicts its own verified value

    proc = UpdateProcedure(space, bad, "bad")
    assert validate_update_procedure(proc, probes=200) > 0


# -- bar recursion ------------------------------------------------------------

def test_zero_br_ordinal_one_matches_learning_process():
    proc = unary_demand_proc(3, 5)
    f = zero_br(proc)
    assert f.get((0,), 3) == 5
    assert proc(f) is None
    run = learning_process(proc)
    assert proc(run.zero) is None


def test_zero_br_ordinal_omega_nested():
    # level 0 must hold 1 at point 0; level 1 must hold level0(0)+1
    space = OmegaPow(1)
    proc = scripted_procedure(space, [
        Demand((0,), 0, 1),
        Demand((1,), 0, ("+", 1, ("at", (0,), 0))),
    ], "omega")
    f = zero_br(proc)
    assert proc(f) is None
    assert f.get((0,), 0) == 1
    assert f.get((1,), 0) == 2


def test_zero_br_empty_procedure_is_zero_family():
    proc = UpdateProcedure(OmegaPow(1), lambda f: None, "empty")
    f = zero_br(proc)
    assert not f


def test_zero_br_omega_squared():
    space = OmegaPow(2)
    proc = scripted_procedure(space, [
        Demand((0, 0), 0, 2),
        Demand((0, 1), 1, ("+", 1, ("at", (0, 0), 0))),
        Demand((1, 0), 0, ("+", ("at", (0, 1), 1), ("at", (0, 0), 0))),
    ], "omega2")
    f = zero_br(proc)
    assert proc(f) is None
    assert f.get((1, 0), 0) == 5
    run = learning_process(proc)
    assert proc(run.zero) is None


def test_level_project():
    space = OmegaPow(1)
    proc = scripted_procedure(space, [Demand((2,), 1, 7)])
    projected = level_project(proc, 2)
    upd = projected(zero_family(space))
    assert upd == ((), 1, 7)
    assert level_project(proc, 0)(zero_family(space)) is None


# -- kernel-term procedures ---------------------------------------------------

def test_kernel_update_procedure():
    # U(f) = empty if f(3) = 5 else |(1, 3, 5)|
    sig = LearningSignature()
    install_update_coding(sig)
    f = Var("f", NAT >> NAT)
    term = Lam("f", NAT >> NAT,
               If(NAT)(Const("eq")(App(f, numeral(3)), numeral(5)),
                       numeral(0),
                       Const("upd3")(numeral(1), numeral(3), numeral(5))))
    proc = kernel_update_procedure(term, 1, sig, "kern")
    run = learning_process(proc)
    assert run.zero.get((0,), 3) == 5
    br = zero_br(proc)
    assert proc(br) is None


def test_update_code_round_trip():
    sig = LearningSignature()
    install_update_coding(sig)
    from realizability.kernel import eval_nat
    code = eval_nat(Const("upd3")(numeral(2), numeral(0), numeral(9)), sig)
    assert decode_update(code) == (2, 0, 9)
    assert decode_update(0) is None


# -- procedure files ----------------------------------------------------------

def test_parse_procedure_file():
    src = "(proc (ordinal omega) (demand (lvl 0) 3 5) (demand (lvl 1) 0 (+ 1 (at (lvl 0) 3))))"
    proc = parse_procedure(src)
    run = learning_process(proc)
    assert run.zero.get((1,), 0) == 6
    assert proc(run.zero) is None


def test_export_learning_trace():
    proc = unary_demand_proc()
    run = learning_process(proc)
    text = export_learning_trace(run)
    assert "ზ" not in text
    assert "0\t(0) 3 -> 5" in text


# -- epsilon ------------------------------------------------------------------

def test_eps_normalize_default_value():
    e = EEps("x", EPred("eq", (EVar("x"), EVar("x"))))
    s = EpsSubstitution()
    out = eps_normalize(e, s)
    assert out == ENum(0)


def test_eps_normalize_single_assignment():
    eps = EEps("x", EPred("lt", (ENum(3), EVar("x"))))
    s = EpsSubstitution({eps: 4})
    f = EPred("lt", (ENum(3), eps))
    out = eps_normalize(f, s)
    assert out == EPred("lt", (ENum(3), ENum(4)))
    assert formula_truth(out)


def test_eps_normalize_nested_innermost_first():
    inner = EEps("x", EPred("eq", (EVar("x"), ENum(2))))
    outer = EEps("y", EPred("lt", (inner, EVar("y"))))
    s = EpsSubstitution({inner: 2})
    # after the inner term is replaced, the outer term becomes canonical;
    # its (default) value then lands everywhere
    out = eps_normalize(EPred("eq", (outer, outer)), s)
    assert out == EPred("eq", (ENum(0), ENum(0)))
    # hand trace: two canonical-inner replacements, then the outer pair
    step1 = eps_normalize(inner, s)
    assert step1 == ENum(2)


def test_eps_normalize_idempotent():
    eps = EEps("x", EPred("eq", (EVar("x"), ENum(4))))
    s = EpsSubstitution({eps: 4})
    f = EImp(EPred("eq", (ENum(1), ENum(1))), EPred("eq", (eps, ENum(4))))
    once = eps_normalize(f, s)
    assert eps_normalize(once, s) == once


def test_critical_update_procedure_least_witness():
    # P = (x = 4): critical P(4) -> P(eps x P)
    body = EPred("eq", (EVar("x"), ENum(4)))
    crit = Critical(body, "x", ENum(4))
    proc, registry = critical_update_procedure([crit])
    upd = proc(zero_family(OmegaPow(1)))
    assert upd is not None
    (level,), idx, value = upd
    assert level == 0 and value == 4


def test_critical_update_procedure_all_true():
    body = EPred("le", (ENum(0), EVar("x")))
    crit = Critical(body, "x", ENum(0))  # trivially true already
    proc, _ = critical_update_procedure([crit])
    assert proc(zero_family(OmegaPow(1))) is None


def test_critical_condition2_probes():
    body = EPred("eq", (EVar("x"), ENum(3)))
    crits = [Critical(body, "x", ENum(5)),
             CriticalZero(ENum(4))]
    proc, _ = critical_update_procedure(crits)
    assert validate_update_procedure(proc, probes=500) == 0


def test_h_process_p4_example():
    body = EPred("eq", (EVar("x"), ENum(4)))
    crit = Critical(body, "x", ENum(4))
    out = h_process([crit])
    eps = EEps("x", body)
    assert out.substitution.value(eps) == 4
    final = eps_normalize(crit.formula(), out.substitution)
    assert formula_truth(final)


def test_h_process_empty_criticals():
    out = h_process([])
    assert not out.substitution.assignment
    assert out.run.steps == 0


def test_h_process_nested_relearning():
    # satisfying the outer epsilon invalidates the inner layer: the repair
    # process must relearn it after the collapse
    inner_body = EPred("eq", (EVar("x"), ENum(2)))
    inner = EEps("x", inner_body)
    outer_body = EPred("eq", (EVar("y"), ESucc(inner)))
    crit_inner = Critical(inner_body, "x", ENum(2))
    crit_outer = Critical(outer_body, "y", ESucc(inner))
    out = h_process([crit_outer, crit_inner])
    assert formula_truth(eps_normalize(crit_inner.formula(), out.substitution))
    assert formula_truth(eps_normalize(crit_outer.formula(), out.substitution))
    assert out.substitution.value(inner) == 2


def test_h_process_exists_witness_equals_brute_force():
    # an existential P(x) encoded via one critical: the learned value is
    # the brute-force least witness
    body = EPred("le", (ENum(6), EVar("x")))  # P(x): 6 <= x
    crit = Critical(body, "x", ENum(9))       # P(9) holds
    out = h_process([crit])
    eps = EEps("x", body)
    brute = next(i for i in range(100) if 6 <= i)
    assert out.substitution.value(eps) == brute == 6


def test_critical_zero_form():
    crit = CriticalZero(ENum(4))
    out = h_process([crit])
    eps = EEps("x", EPred("eq", (ENum(4), ESucc(EVar("x")))))
    assert out.substitution.value(eps) == 3


def test_malformed_critical_rejected():
    open_body = EPred("eq", (EVar("x"), EVar("y")))  # y stays free
    with pytest.raises(MalformedCritical):
        critical_update_procedure([Critical(open_body, "x", ENum(0))])


def test_parse_criticals():
    src = "(crit x (eq x 4) 4)\n(crit0 (succ (succ 0)))"
    crits = parse_criticals(src)
    assert len(crits) == 2
    assert isinstance(crits[0], Critical)
    assert isinstance(crits[1], CriticalZero)
    out = h_process(crits)
    for c in crits:
        assert formula_truth(eps_normalize(c.formula(), out.substitution))

"""Moduli of convergence: combinators, the star model, the zero finder."""

import random

import pytest

from realizability.convergence import (
    PHI, FunChain, StarAtomic, UnsupportedConstant, eval_at_chain, h1_merge,
    h_lift, identity_modulus, interpret, join, modulus_report, modulus_rows,
    star_const, zero_via_moduli, zero_via_moduli_report,
)
from realizability.corpus import coquand_item, staircase
from realizability.kernel import (
    App, Const, If, Lam, NAT, Proj, Rec, Var, Y, numeral,
)
from realizability.oracle import OracleTerm, zero_loop
from realizability.states import EMPTY, LearningSignature, PredicateSig, state


def exact_modulus(f, cap=200):
    """Brute-force least-start modulus for a sequence f (test oracle)."""

    def modulus(h):
        def at(z):
            start = z
            while start < cap:
                end = h(start)
                if all(f(m) == f(start) for m in range(start, end + 1)):
                    return start
                start += 1
            raise AssertionError("no constant interval found below the cap")
        return at

    return modulus


def check_interval(f, h, start):
    end = h(start)
    values = {f(m) for m in range(start, end + 1)}
    assert len(values) == 1


# -- join ----------------------------------------------------------------------

def test_join_identity_moduli_on_constants():
    j = join(identity_modulus, identity_modulus)
    assert j(lambda m: m)(7) == 7


def test_join_interval_serves_both_functions():
    f1 = lambda m: min(m, 3)
    f2 = lambda m: min(m, 5)
    m1, m2 = exact_modulus(f1), exact_modulus(f2)
    j = join(m1, m2)
    h = lambda m: m + 1
    for z in range(8):
        start = j(h)(z)
        assert start >= z
        check_interval(f1, h, start)
        check_interval(f2, h, start)
        if z <= 5:
            assert start >= 5  # f2 only stabilizes at 5


def test_join_with_successor_h_endpoint_values_equal():
    f1 = lambda m: min(m, 2)
    f2 = lambda m: min(2 * m, 8)
    j = join(exact_modulus(f1), exact_modulus(f2))
    h = lambda m: m + 1
    start = j(h)(0)
    assert f1(start) == f1(start + 1)
    assert f2(start) == f2(start + 1)


# -- h1 merge -------------------------------------------------------------------

def test_h1_merge_constant_selector_behaves_like_join():
    fam = {0: lambda m: min(m, 4), 1: lambda m: 0}
    fam_moduli = {a: exact_modulus(f) for a, f in fam.items()}
    g = lambda m: 0  # constant selector
    merged = h1_merge(exact_modulus(g), lambda a: fam_moduli[a], g)
    h = lambda m: m + 2
    target = lambda m: fam[g(m)](m)
    for z in range(6):
        start = merged(h)(z)
        assert start >= z
        check_interval(target, h, start)


def test_h1_merge_two_valued_selector():
    fam = {0: lambda m: min(m, 3), 1: lambda m: min(m, 6) * 2}
    fam_moduli = {a: exact_modulus(f) for a, f in fam.items()}
    g = lambda m: 0 if m < 4 else 1
    merged = h1_merge(exact_modulus(g), lambda a: fam_moduli[a], g)
    target = lambda m: fam[g(m)](m)
    for name, h in (("+1", lambda m: m + 1), ("+3", lambda m: m + 3)):
        for z in range(8):
            start = merged(h)(z)
            check_interval(g, h, start)
            check_interval(target, h, start)


def test_h1_merge_inflationary():
    fam_moduli = lambda a: identity_modulus
    merged = h1_merge(identity_modulus, fam_moduli, lambda m: 0)
    rng = random.Random(3)
    for _ in range(100):
        z = rng.randrange(50)
        assert merged(lambda m: m)(z) >= z


# -- star values ----------------------------------------------------------------

def test_h_lift_atomic_points():
    base = StarAtomic(identity_modulus, lambda n: n % 2)
    fam = {0: StarAtomic(identity_modulus, lambda n: 10 + n),
           1: StarAtomic(identity_modulus, lambda n: 20 + n)}
    lifted = h_lift(base, lambda a: fam[a])
    assert isinstance(lifted, StarAtomic)
    for n in range(6):
        assert lifted.points(n) == fam[n % 2].points(n)


def test_h_lift_arrow_distributes():
    base = star_const(0)
    fam = {0: (lambda v: star_const(v.points(0) + 1))}
    lifted = h_lift(base, lambda a: fam[a])
    assert callable(lifted)
    out = lifted(star_const(41))
    assert isinstance(out, StarAtomic)
    assert out.points(0) == 42


def test_h_lift_product_is_pair_of_lifts():
    base = star_const(0)
    fam = {0: (star_const(1), star_const(2))}
    lifted = h_lift(base, lambda a: fam[a])
    assert isinstance(lifted, tuple)
    assert lifted[0].points(5) == 1
    assert lifted[1].points(5) == 2


# -- interpretation ---------------------------------------------------------------

def chain_of_functions(fs):
    fs = list(fs)
    return FunChain(lambda i: fs[i] if i < len(fs) else fs[-1])


def test_interpret_zero():
    sig = LearningSignature()
    chain = FunChain.constant(lambda n: 0)
    sv = interpret(numeral(0), chain, sig)
    assert isinstance(sv, StarAtomic)
    assert sv.points(3) == 0
    assert sv.modulus(lambda m: m + 1)(4) == 4


def test_interpret_phi_points_follow_chain():
    sig = LearningSignature()
    sig.register(PHI, NAT >> NAT)
    fs = [lambda n: 0, lambda n: 5 if n == 3 else 0, lambda n: 5 if n == 3 else 7]
    chain = chain_of_functions(fs)
    t = App(Const(PHI), numeral(3))
    sv = interpret(t, chain, sig)
    for m in range(5):
        assert sv.points(m) == chain(m)(3)
        assert sv.points(m) == eval_at_chain(t, chain, m, sig)
    # modulus law on the sampled policy
    rows = modulus_rows(t, chain, sig, zs=range(0, 10))
    assert rows


def test_interpret_rec_matches_direct_evaluation():
    sig = LearningSignature()
    sig.register(PHI, NAT >> NAT)
    fs = [lambda n: 0, lambda n: n + 1, lambda n: n + 1]
    chain = chain_of_functions(fs)
    v = Lam("n", NAT, Lam("r", NAT, App(Const(PHI), Var("n", NAT))))
    for k in range(4):
        t = Rec(NAT)(numeral(0), v, numeral(k))
        sv = interpret(t, chain, sig)
        for m in range(5):
            assert sv.points(m) == eval_at_chain(t, chain, m, sig)


def test_interpret_rec_unfolding_probe():
    # the recursor's interpretation satisfies its defining recursion
    sig = LearningSignature()
    chain = FunChain.constant(lambda n: 0)
    from realizability.convergence import _rec_star, star_const as sc
    rec = _rec_star()
    base = sc(10)
    stepf = lambda k: lambda r: StarAtomic(
        join(k.modulus, r.modulus), lambda n: r.points(n) + 1)
    for idx in range(4):
        direct = base
        for i in range(idx):
            direct = stepf(sc(i))(direct)
        lifted = rec(base)(stepf)(sc(idx))
        for m in range(4):
            assert lifted.points(m) == direct.points(m)


def test_interpret_application_respects_star_application():
    sig = LearningSignature()
    sig.register(PHI, NAT >> NAT)
    fs = [lambda n: 0, lambda n: n + 2, lambda n: n + 2]
    chain = chain_of_functions(fs)
    u = Lam("x", NAT, App(Const(PHI), Var("x", NAT)))
    t = App(Const(PHI), numeral(2))
    whole = interpret(App(u, t), chain, sig)
    parts = interpret(u, chain, sig)(interpret(t, chain, sig))
    for m in range(6):
        assert whole.points(m) == parts.points(m)


def test_interpret_rejects_fixpoints():
    sig = LearningSignature()
    chain = FunChain.constant(lambda n: 0)
    with pytest.raises(UnsupportedConstant):
        interpret(Y(NAT), chain, sig)


def test_modulus_report_format():
    sig = LearningSignature()
    sig.register(PHI, NAT >> NAT)
    chain = chain_of_functions([lambda n: 0, lambda n: 1, lambda n: 1])
    rows = modulus_rows(App(Const(PHI), numeral(0)), chain, sig, zs=range(0, 3))
    text = modulus_report(rows)
    assert text.splitlines()[0] == "h\tz\tM_h(z)\th(M_h(z))\tvalue"
    assert len(text.splitlines()) == len(rows) + 1


# -- the moduli-driven zero finder -------------------------------------------------

def test_zero_via_moduli_add_example():
    sig = LearningSignature()
    sig.register_predicate(PredicateSig("P", 1, fn=lambda n, m: (n, m) == (3, 5)))
    fam = Lam("i", NAT, Const("Add_P")(numeral(3), numeral(5)))
    t = OracleTerm(fam, sig)
    out = zero_via_moduli_report(t, 0)
    assert out.state == state(("P", (3,), 5))
    loop = zero_loop(OracleTerm(Const("Add_P")(numeral(3), numeral(5)), sig))
    assert out.state == loop.zero_state
    assert out.state == out.sigma[out.index + 1]


def test_zero_via_moduli_empty_term():
    from realizability.kernel import StateConst
    sig = LearningSignature()
    sig.register_predicate(PredicateSig("P", 1, fn=lambda n, m: False))
    fam = Lam("i", NAT, StateConst(EMPTY))
    out = zero_via_moduli_report(OracleTerm(fam, sig), 0)
    assert out.state == EMPTY
    assert out.index == 0


def test_zero_via_moduli_agrees_with_zero_loop_on_coquand():
    table = staircase(2)
    item = coquand_item(table)
    a = 1
    applied = Lam("i", NAT, Proj(1, App(item.realizer.term, numeral(a))))
    t = OracleTerm(applied, item.sig)
    out = zero_via_moduli(t, 0)
    direct = OracleTerm(Proj(1, App(item.realizer.term, numeral(a))), item.sig)
    from realizability.oracle import nf_state
    assert nf_state(direct, out) == EMPTY
    loop = zero_loop(direct)
    assert nf_state(direct, loop.zero_state) == EMPTY


def test_modulus_law_on_coquand_state_term():
    table = staircase(2)
    item = coquand_item(table)
    from realizability.convergence import phi_coded_term, state_to_fun, _oracle_predicates
    from realizability.oracle import nf_state
    direct = OracleTerm(Proj(1, App(item.realizer.term, numeral(1))), item.sig)
    preds = _oracle_predicates(direct)
    if not item.sig.has(PHI):
        item.sig.register(PHI, NAT >> NAT)
    coded = phi_coded_term(direct, preds)
    loop = zero_loop(direct)
    chain = FunChain(lambda i: state_to_fun(
        item.sig, preds, loop.trace[min(i, len(loop.trace) - 1)]))
    rows = modulus_rows(coded, chain, item.sig, zs=range(0, 8))
    assert rows

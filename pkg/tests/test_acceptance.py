"""Acceptance criteria, one test per criterion, each printing a pass/fail
line.  Tolerances and time budgets are pinned here; property checks are
run at the documented sampling policies."""

import json
import random
import time

import pytest

from realizability.convergence import (
    PHI, FunChain, _oracle_predicates, modulus_rows, phi_coded_term,
    state_to_fun, zero_via_moduli_report,
)
from realizability.corpus import (
    brute_force_shift_witness, coquand_item, em1_item, minimum_item,
    staircase,
)
from realizability.epsilon import (
    Critical, eps_normalize, formula_truth, h_process, parse_criticals,
)
from realizability.games import (
    HandwrittenEM1Omega, Play, RandomAbelard, RealizerEloise, ScriptedAbelard,
    SpoilerAbelard, learning_strategy_from_winning, run_1back,
    strategy_to_realizer,
)
from realizability.kernel import App, Lam, NAT, Proj, StateConst, numeral
from realizability.oracle import OracleTerm, nf_state, zero_loop
from realizability.realizer import (
    extract_witness, p1, p2, realizes_bounded,
)
from realizability.states import EMPTY, cup, leq_state, state
from realizability.syntax import parse_state


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, name


# -- 1: the excluded-middle game trace -----------------------------------------

def test_em1_trace():
    start = time.time()
    item = em1_item()
    n, m = 2, 3  # P(2, 3) holds for the bundled successor predicate
    out = run_1back(item.formula, RealizerEloise(item.realizer),
                    ScriptedAbelard([n, m]), item.sig)
    elapsed = time.time() - start
    script = [(r.player, r.kind) for r in out.records]
    expected_script = [
        ("abelard", "move"), ("eloise", "move"), ("abelard", "move"),
        ("eloise", "backtrack"), ("eloise", "move"), ("eloise", "move")]
    line_by_line = (
        script == expected_script
        and out.records[1].position.startswith("(all y")     # universal side
        and parse_state(out.records[3].state) == state(("P", (n,), m))
        and out.records[3].backtrack_to == 2                 # to the disjunction
        and out.records[4].position.startswith("(ex y")      # existential side
    )
    ok = (out.winner == "eloise" and out.eloise_backtracks == 1
          and out.final_state == state(("P", (n,), m))
          and line_by_line and elapsed < 1.0)
    report("em1 trace: one backtrack, learned atom, paper trace", ok,
           f"{elapsed:.3f}s")


# -- 2: minimum principle backtrack bound ---------------------------------------

def test_minimum_principle_bound():
    start = time.time()
    ok = True
    details = []
    for b in range(0, 11):
        item = minimum_item({x: max(b - x, 0) for x in range(b + 1)})
        out = run_1back(item.formula, RealizerEloise(item.realizer),
                        SpoilerAbelard(scan=2 * b + 8), item.sig)
        details.append(out.eloise_backtracks)
        ok = ok and out.winner == "eloise" and out.eloise_backtracks <= b
    elapsed = time.time() - start
    ok = ok and elapsed < 5.0
    report("minimum principle: backtracks bounded by f(0)", ok,
           f"backtracks {details}, {elapsed:.2f}s")


# -- 3: the shift-comparison witness ---------------------------------------------

def test_coquand_witness_and_chain():
    start = time.time()
    rng = random.Random(2026)
    ok = True
    for _ in range(20):
        a = rng.randrange(1, 6)
        steps = rng.randrange(0, 6)
        noise = {k: rng.randrange(4) for k in range(1, steps * a + a)
                 if k % a != 0}
        table = staircase(steps, a, noise)
        item = coquand_item(table)
        f = lambda x: table.get(x, 0)
        out = extract_witness(item.realizer, item.formula, a)
        ok = ok and out.witness == brute_force_shift_witness(f, a)
        expected_chain = {("P", (f(j * a),), (j + 1) * a) for j in range(steps)}
        got = {(at.pred, at.args, at.witness) for at in out.zero_state}
        ok = ok and got == expected_chain
    elapsed = time.time() - start
    ok = ok and elapsed < 10.0
    report("coquand: witness equals the naive scan, chain-shaped state", ok,
           f"{elapsed:.2f}s")


# -- 4: the zero theorem on corpus state components ------------------------------

def corpus_state_components():
    em1 = em1_item()
    e_at = App(em1.realizer.term, numeral(2))
    yield "em1 universal tester", OracleTerm(App(p2(e_at), numeral(3)), em1.sig)
    yield "em1 existential slot", OracleTerm(Proj(1, p1(e_at)), em1.sig)
    minimum = minimum_item(staircase(4))
    m = minimum.realizer.term
    yield "minimum forall part", OracleTerm(
        App(Proj(0, Proj(1, m)), numeral(1)), minimum.sig)
    yield "minimum exists slot", OracleTerm(Proj(1, Proj(1, Proj(1, m))), minimum.sig)
    coquand = coquand_item(staircase(3))
    for a in (0, 1, 2):
        yield f"coquand update at {a}", OracleTerm(
            Proj(1, App(coquand.realizer.term, numeral(a))), coquand.sig)


def test_zero_theorem_on_corpus():
    total = 0
    good = 0
    for name, t in corpus_state_components():
        total += 1
        result = zero_loop(t, fuel=10**6)
        if nf_state(t, result.zero_state, fuel=10**6) == EMPTY:
            good += 1
        for s1, s2 in zip(result.trace, result.trace[1:]):
            assert leq_state(s1, s2)
    report("zero theorem: loop reaches an empty update on all components",
           good == total, f"{good}/{total}")


# -- 5: adequacy of the extracted realizers --------------------------------------

def witness_trace_states(item, shift=1):
    applied = App(item.realizer.term, numeral(shift))
    if item.name == "coquand":
        return zero_loop(OracleTerm(Proj(1, applied), item.sig)).trace
    if item.name == "minimum":
        out = run_1back(item.formula, RealizerEloise(item.realizer),
                        SpoilerAbelard(scan=16), item.sig)
        return [parse_state(r.state) for r in out.records] or [EMPTY]
    out = run_1back(item.formula, RealizerEloise(item.realizer),
                    ScriptedAbelard([2, 3]), item.sig)
    return [EMPTY] + [parse_state(r.state) for r in out.records]


def test_adequacy_suite():
    checked = 0
    refuted = 0
    for item in (em1_item(), minimum_item(staircase(3)), coquand_item(staircase(3))):
        for s in witness_trace_states(item):
            verdict = realizes_bounded(item.realizer, item.formula, s, bound=8)
            checked += 1
            refuted += verdict.refuted
    report("adequacy: no refutation at any witness-trace state",
           refuted == 0, f"{checked} checks")


# -- 6: confluence fuzz ------------------------------------------------------------

def test_confluence_fuzz():
    from realizability.kernel import normalize
    from test_kernel import random_term
    rng = random.Random(1204)
    agree = 0
    for _ in range(100):
        t = random_term(rng, NAT, {}, rng.randrange(1, 7))
        lo = normalize(t, strategy="leftmost-outermost")
        ri = normalize(t, strategy="rightmost-innermost")
        agree += lo == ri
    report("confluence: both strategies reach the same normal form",
           agree == 100, f"{agree}/100")


# -- 7: soundness playouts ----------------------------------------------------------

def test_soundness_playouts():
    rng = random.Random(99)
    results = {}
    for item in (em1_item(), minimum_item(staircase(4)), coquand_item(staircase(3))):
        wins = 0
        for _ in range(1000):
            out = run_1back(item.formula, RealizerEloise(item.realizer),
                            RandomAbelard(rng, bound=8), item.sig)
            wins += out.winner == "eloise"
        results[item.name] = wins
    ok = all(v == 1000 for v in results.values())
    report("soundness: realizer strategy wins 1000/1000 playouts per formula",
           ok, str(results))


# -- 8: the completeness pipeline ----------------------------------------------------

def test_completeness_pipeline():
    item = em1_item()
    pipeline = learning_strategy_from_winning(
        HandwrittenEM1Omega(item.sig), item.formula, item.sig)
    t = strategy_to_realizer(pipeline)
    v1 = realizes_bounded(t, item.formula, EMPTY, bound=8)
    v2 = realizes_bounded(t, item.formula, state(("P", (2,), 3)), bound=8)
    report("completeness: strategy-derived realizer passes the checker",
           v1.realized and v2.realized, f"verdicts {v1.kind}/{v2.kind}")


# -- 9: the modulus law ---------------------------------------------------------------

def corpus_moduli_cases():
    from realizability.kernel import Const
    sig_item = em1_item()
    add_term = OracleTerm(Const("Add_P")(numeral(2), numeral(3)), sig_item.sig)
    yield "add term", add_term
    coquand = coquand_item(staircase(2))
    yield "coquand update", OracleTerm(
        Proj(1, App(coquand.realizer.term, numeral(1))), coquand.sig)


def test_modulus_law():
    rows_total = 0
    for name, t in corpus_moduli_cases():
        sig = t.sig
        if not sig.has(PHI):
            sig.register(PHI, NAT >> NAT)
        preds = _oracle_predicates(t)
        coded = phi_coded_term(t, preds)
        loop = zero_loop(t)
        trace = loop.trace
        chain = FunChain(lambda i, _tr=trace, _p=preds, _s=sig: state_to_fun(
            _s, _p, _tr[min(i, len(_tr) - 1)]))
        rows = modulus_rows(coded, chain, sig, zs=range(0, 21))
        rows_total += len(rows)
    report("modulus law: intervals constant, modulus inflationary",
           rows_total > 0, f"{rows_total} sampled rows, zero violations")


# -- 10: agreement of the two zero finders ---------------------------------------------

def test_zero_finder_agreement():
    cases = []
    em1 = em1_item()
    cases.append(("add", OracleTerm(
        App(p2(App(em1.realizer.term, numeral(2))), numeral(3)), em1.sig)))
    cases.append(("empty", OracleTerm(StateConst(EMPTY), em1.sig)))
    coquand = coquand_item(staircase(2))
    cases.append(("coquand", OracleTerm(
        Proj(1, App(coquand.realizer.term, numeral(1))), coquand.sig)))
    good = 0
    for name, t in cases:
        fam = OracleTerm(Lam("i", NAT, t.term), t.sig)
        via_moduli = zero_via_moduli_report(fam, 0)
        via_loop = zero_loop(t)
        ok = (nf_state(t, via_moduli.state) == EMPTY
              and nf_state(t, via_loop.zero_state) == EMPTY)
        good += ok
    report("zero finders: moduli bound and learning loop both reach zeros",
           good == len(cases), f"{good}/{len(cases)}")


# -- 11: update procedures ---------------------------------------------------------------

def test_update_procedures():
    from realizability.update import (
        learning_process, parse_procedure, validate_update_procedure, zero_br)
    with open("procs/u1") as fh:
        p1_ = parse_procedure(fh.read())
    with open("procs/omega") as fh:
        pw = parse_procedure(fh.read())
    with open("procs/omega2") as fh:
        pw2 = parse_procedure(fh.read())
    with open("procs/omega-times-2") as fh:
        pt2 = parse_procedure(fh.read())
    ok = True
    details = []
    for proc, bar in ((p1_, True), (pw, True), (pw2, True), (pt2, False)):
        run = learning_process(proc)
        ok = ok and proc(run.zero) is None
        if bar:
            br = zero_br(proc)
            ok = ok and proc(br) is None
        violations = validate_update_procedure(proc, probes=500)
        details.append(f"{proc.space.name}:{violations}")
        ok = ok and violations == 0
    report("update procedures: both zero finders succeed, condition probes clean",
           ok, " ".join(details))


# -- 12: epsilon substitution -----------------------------------------------------------

def test_epsilon_process():
    with open("procs/criticals1.eps") as fh:
        crits = parse_criticals(fh.read())
    out = h_process(crits)
    all_true = all(
        formula_truth(eps_normalize(c.formula(), out.substitution))
        for c in crits)
    # an existential statement via one critical: least-witness agreement
    from realizability.epsilon import EEps, ENum, EPred, EVar
    body = EPred("le", (ENum(6), EVar("x")))
    exist = h_process([Critical(body, "x", ENum(9))])
    brute = next(i for i in range(100) if 6 <= i)
    witness_ok = exist.substitution.value(EEps("x", body)) == brute
    report("epsilon: repair terminates, criticals true, least witness",
           all_true and witness_ok, f"{out.run.steps} repair steps")

"""Realizers: extraction from checked proofs, the excluded-middle realizer,
a bounded realizability checker, and witness extraction via the zero loop.

Extraction decorates each inference with a term of the oracle calculus:
pairing for conjunction, abstraction for implication, case split for
disjunction, primitive recursion for induction, the consistent union of
premise realizers for Post rules, and the self-correcting triple

    E_P = \\vec{x} |-> < Chi_P x, < Phi_P x, {} >, n |-> Add_P x n >

for the restricted excluded middle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .dummy import dummy
from .kernel import (
    BOOL, FALSE, NAT, TRUE, App, Const, If, KnowledgeStateLike, Lam, Pair,
    Proj, Rec, StateConst, Term, Var, ZeroC, eval_bool, eval_nat, evaluate,
    numeral, typecheck, DEFAULT_FUEL,
)
from .logic import (
    And, Atomic, AndE, AndI, Assumption, AtomicAxiom, CheckedProof, ChiAxiom,
    EM1, ExistsE, ExistsI, ExistsNat, ForallE, ForallI, ForallNat, Formula,
    ImpE, ImpI, Implies, Induction, Or, OrE, OrIL, OrIR, PhiAxiom, Post,
    Proof, RuleMismatch, realizer_type, subst_formula,
)
from .oracle import OracleTerm, ZeroResult, approximate, zero_loop
from .states import EMPTY, KnowledgeState, LearningSignature


def p0(t: Term) -> Term:
    return Proj(0, t)


def p1(t: Term) -> Term:
    return Proj(0, Proj(1, t))


def p2(t: Term) -> Term:
    return Proj(1, Proj(1, t))


def triple(a: Term, b: Term, c: Term) -> Term:
    return Pair(a, Pair(b, c))


def em1_realizer(sig: LearningSignature, pred: str) -> OracleTerm:
    """The self-correcting realizer of the excluded-middle instance for P."""
    k = sig.predicates[pred].arity
    xs = [f"x{i + 1}" for i in range(k)]
    chi: Term = Const(f"Chi_{pred}")
    phi: Term = Const(f"Phi_{pred}")
    add: Term = Const(f"Add_{pred}")
    for x in xs:
        chi = App(chi, Var(x, NAT))
        phi = App(phi, Var(x, NAT))
        add = App(add, Var(x, NAT))
    body = triple(chi, Pair(phi, StateConst(EMPTY)),
                  Lam("n", NAT, App(add, Var("n", NAT))))
    for x in reversed(xs):
        body = Lam(x, NAT, body)
    return OracleTerm(body, sig)


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

def extract(checked: CheckedProof) -> OracleTerm:
    """The program of a checked proof; its type is the conclusion's
    realizer type, free variables are the open assumptions (at their
    realizer types) plus the free numeric variables."""
    _, term = _extract(checked.proof, checked.sig)
    return OracleTerm(term, checked.sig)


def _extract(p: Proof, sig: LearningSignature) -> tuple[Formula, Term]:
    match p:
        case Assumption(label, a):
            return a, Var(label, realizer_type(a))

        case AndI(l, r):
            cl, tl = _extract(l, sig)
            cr, tr = _extract(r, sig)
            return And(cl, cr), Pair(tl, tr)

        case AndE(i, sub):
            c, t = _extract(sub, sig)
            assert isinstance(c, And)
            return (c.left if i == 0 else c.right), Proj(i, t)

        case ImpI(label, ant, sub):
            c, t = _extract(sub, sig)
            return Implies(ant, c), Lam(label, realizer_type(ant), t)

        case ImpE(f, a):
            cf, tf = _extract(f, sig)
            _, ta = _extract(a, sig)
            assert isinstance(cf, Implies)
            return cf.consequent, App(tf, ta)

        case OrIL(sub, right):
            c, t = _extract(sub, sig)
            return Or(c, right), triple(TRUE, t, dummy(realizer_type(right)))

        case OrIR(left, sub):
            c, t = _extract(sub, sig)
            return Or(left, c), triple(FALSE, dummy(realizer_type(left)), t)

        case OrE(scrut, xl, subl, xr, subr):
            cs, ts = _extract(scrut, sig)
            assert isinstance(cs, Or)
            cl, tl = _extract(subl, sig)
            _, tr = _extract(subr, sig)
            out = If(realizer_type(cl))(
                p0(ts),
                App(Lam(xl, realizer_type(cs.left), tl), p1(ts)),
                App(Lam(xr, realizer_type(cs.right), tr), p2(ts)))
            return cl, out

        case ForallI(x, sub):
            c, t = _extract(sub, sig)
            return ForallNat(x, c), Lam(x, NAT, t)

        case ForallE(sub, term):
            c, t = _extract(sub, sig)
            assert isinstance(c, ForallNat)
            return subst_formula(c.body, c.var, term), App(t, term)

        case ExistsI(x, body, witness, sub):
            _, t = _extract(sub, sig)
            return ExistsNat(x, body), Pair(witness, t)

        case ExistsE(scrut, eigen, label, sub):
            cs, ts = _extract(scrut, sig)
            assert isinstance(cs, ExistsNat)
            c, t = _extract(sub, sig)
            hyp_type = realizer_type(subst_formula(cs.body, cs.var, Var(eigen, NAT)))
            fun = Lam(eigen, NAT, Lam(label, hyp_type, t))
            return c, App(App(fun, Proj(0, ts)), Proj(1, ts))

        case Induction(x, motive, base, step):
            _, tb = _extract(base, sig)
            _, tstep = _extract(step, sig)
            rec = Rec(realizer_type(motive))(tb, tstep, Var(x, NAT))
            return ForallNat(x, motive), Lam(x, NAT, rec)

        case Post(_, conclusion, premises):
            terms = [_extract(q, sig)[1] for q in premises]
            out = terms[0]
            for t in terms[1:]:
                out = Const("cup")(out, t)
            return conclusion, out

        case AtomicAxiom(a):
            return a, StateConst(EMPTY)

        case EM1(pred):
            from .logic import em1_formula
            return em1_formula(sig, pred), em1_realizer(sig, pred).term

        case ChiAxiom(pred, args, witness):
            from .logic import _check
            concl, _ = _check(p, sig)
            add: Term = Const(f"Add_{pred}")
            for t in args:
                add = App(add, t)
            return concl, App(add, witness)

        case PhiAxiom(_, _):
            from .logic import _check
            concl, _ = _check(p, sig)
            return concl, StateConst(EMPTY)

    raise RuleMismatch(f"cannot extract from {p!r}")


# ---------------------------------------------------------------------------
# Bounded realizability checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    kind: str  # "realized" | "refuted" | "inconclusive"
    path: tuple[str, ...] = ()
    reason: str = ""

    @property
    def realized(self) -> bool:
        return self.kind == "realized"

    @property
    def refuted(self) -> bool:
        return self.kind == "refuted"


REALIZED = Verdict("realized")


def realizes_bounded(t: OracleTerm, a: Formula, s: KnowledgeState,
                     bound: int = 8,
                     candidates: Optional[dict[Formula, Sequence[Term]]] = None,
                     fuel: int = DEFAULT_FUEL) -> Verdict:
    """Sound-but-incomplete check of the state-indexed realizability clauses.

    Universal quantifiers are tested on numerals 0..bound; implications
    only against caller-supplied candidate realizers of the antecedent
    (Inconclusive when there are none).  Refutations report the clause
    path and instantiation.
    """
    candidates = candidates or {}
    return _check_clause(t.term, a, s, bound, candidates, t.sig, fuel, ())


def _approx_eval(term: Term, s: KnowledgeState, sig: LearningSignature, fuel: int):
    return evaluate(approximate(OracleTerm(term, sig), s), sig, fuel)


def _check_clause(term: Term, a: Formula, s: KnowledgeState, bound: int,
                  candidates: dict, sig: LearningSignature, fuel: int,
                  path: tuple[str, ...]) -> Verdict:
    match a:
        case Atomic(body):
            v = _approx_eval(term, s, sig, fuel)
            if v == EMPTY:
                truth = _approx_eval(body, s, sig, fuel)
                if truth is not True:
                    return Verdict("refuted", path + ("atomic",),
                                   "empty update but false atom")
            return REALIZED
        case And(l, r):
            left = _check_clause(Proj(0, term), l, s, bound, candidates, sig,
                                 fuel, path + ("and-left",))
            if not left.realized:
                return left
            return _check_clause(Proj(1, term), r, s, bound, candidates, sig,
                                 fuel, path + ("and-right",))
        case Or(l, r):
            flag = _approx_eval(p0(term), s, sig, fuel)
            if flag is True:
                return _check_clause(p1(term), l, s, bound, candidates, sig,
                                     fuel, path + ("or-left",))
            if flag is False:
                return _check_clause(p2(term), r, s, bound, candidates, sig,
                                     fuel, path + ("or-right",))
            return Verdict("refuted", path + ("or-flag",), f"flag value {flag!r}")
        case Implies(ant, cons):
            pool = candidates.get(ant, [])
            found_candidate = False
            for u in pool:
                if _check_clause(u, ant, s, bound, candidates, sig, fuel,
                                 path + ("imp-candidate",)).realized:
                    found_candidate = True
                    out = _check_clause(App(term, u), cons, s, bound,
                                        candidates, sig, fuel, path + ("imp",))
                    if not out.realized:
                        return out
            if not found_candidate:
                return Verdict("inconclusive", path + ("imp",),
                               "no candidate realizers for the antecedent")
            return REALIZED
        case ForallNat(x, body):
            for n in range(bound + 1):
                out = _check_clause(App(term, numeral(n)),
                                    subst_formula(body, x, numeral(n)),
                                    s, bound, candidates, sig, fuel,
                                    path + (f"forall {n}",))
                if not out.realized:
                    return out
            return REALIZED
        case ExistsNat(x, body):
            witness = _approx_eval(Proj(0, term), s, sig, fuel)
            if not isinstance(witness, int):
                return Verdict("refuted", path + ("exists",),
                               f"witness is not a numeral: {witness!r}")
            return _check_clause(Proj(1, term),
                                 subst_formula(body, x, numeral(witness)),
                                 s, bound, candidates, sig, fuel,
                                 path + (f"exists {witness}",))
    raise TypeError(a)


# ---------------------------------------------------------------------------
# Witness extraction
# ---------------------------------------------------------------------------

@dataclass
class WitnessResult:
    witness: int
    zero: ZeroResult

    @property
    def zero_state(self) -> KnowledgeState:
        return self.zero.zero_state

    @property
    def steps(self) -> int:
        return self.zero.steps


def extract_witness(t: OracleTerm, formula: Formula, n: int,
                    fuel: int = DEFAULT_FUEL) -> WitnessResult:
    """Effective witnessing for Pi-0-2 statements.

    For ``t`` realizing ``forall x exists y P(x, y)``, runs the zero loop
    on the state component of ``t n`` and reads the witness off the
    numeral component at the zero state; the postcondition P(n, witness)
    is asserted on every run.
    """
    if not (isinstance(formula, ForallNat)
            and isinstance(formula.body, ExistsNat)
            and isinstance(formula.body.body, Atomic)):
        raise ValueError("witness extraction needs a forall-exists-atomic formula")
    applied = App(t.term, numeral(n))
    state_part = OracleTerm(Proj(1, applied), t.sig)
    zr = zero_loop(state_part, fuel=fuel)
    witness = eval_nat(approximate(OracleTerm(Proj(0, applied), t.sig), zr.zero_state),
                       t.sig, fuel)
    instance = subst_formula(
        subst_formula(formula.body.body, formula.body.var, numeral(witness)),
        formula.var, numeral(n))
    assert isinstance(instance, Atomic)
    truth = evaluate(approximate(OracleTerm(instance.body, t.sig), zr.zero_state),
                     t.sig, fuel)
    if truth is not True:
        raise AssertionError(
            f"extracted witness {witness} fails the postcondition at n={n}")
    return WitnessResult(witness, zr)

"""The worked-example corpus: the excluded-middle instance, the minimum
principle for functions over naturals, and the shift-comparison statement
proved from it.

Each item bundles a signature (predicates plus the sampled function
constant ``f``), a natural-deduction proof, its conclusion, and the
extracted realizer.  The derivations follow the standard pattern: the
minimum principle goes by induction on a bound for a value of ``f``,
consulting the excluded middle for "is there a point below the current
bound"; the shift comparison instantiates the universal half of the
minimum at a shifted point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .kernel import App, Const, Lam, NAT, Succ, Term, Var, numeral
from .logic import (
    And, Atomic, AndE, AndI, Assumption, AtomicAxiom, CheckedProof, EM1,
    ExistsE, ExistsI, ExistsNat, ForallE, ForallI, ForallNat, Formula, ImpE,
    ImpI, Implies, Induction, Or, OrE, Post, Proof, check_proof, em1_formula,
    subst_formula,
)
from .oracle import OracleTerm
from .realizer import extract
from .states import LearningSignature, PredicateSig


@dataclass
class CorpusItem:
    name: str
    sig: LearningSignature
    proof: Proof
    checked: CheckedProof
    formula: Formula
    realizer: OracleTerm


def register_function(sig: LearningSignature, name: str,
                      table: Mapping[int, int], default: int = 0) -> None:
    """A unary function constant given by a finite table (default 0)."""
    frozen = dict(table)
    sig.register(name, NAT >> NAT, lambda n: frozen.get(n, default))


def em1_item(truth: Optional[Callable[[int, int], bool]] = None) -> CorpusItem:
    """The excluded-middle instance itself, for a decidable binary P.

    Default P(x, y): y is the successor of x.
    """
    sig = LearningSignature()
    sig.register_predicate(PredicateSig("P", 1, fn=truth or (lambda x, y: y == x + 1)))
    proof = EM1("P")
    checked = check_proof(proof, sig)
    return CorpusItem("em1", sig, proof, checked, checked.conclusion, extract(checked))


def _fv(name: str) -> Term:
    return Var(name, NAT)


def f_at(t: Term) -> Term:
    return App(Const("f"), t)


def minimum_formulas(sig: LearningSignature):
    """Lessf, Notlessf, Lessef, Hasminf built over the predicate P(y, a):
    f(a) < y, with the first two destructured from the EM1 instance so the
    shapes agree exactly."""
    em1f = em1_formula(sig, "P")
    assert isinstance(em1f, ForallNat) and isinstance(em1f.body, Or)
    orpart = em1f.body

    def lessf(t: Term) -> Formula:
        return subst_formula(orpart.left, em1f.var, t)

    def notlessf(t: Term) -> Formula:
        return subst_formula(orpart.right, em1f.var, t)

    def lessef(t: Term) -> Formula:
        return ExistsNat("al", Atomic(Const("le")(f_at(_fv("al")), t)))

    hasmin = ExistsNat("mu", And(notlessf(_fv("mu")), lessef(_fv("mu"))))
    return lessf, notlessf, lessef, hasmin


def minimum_sig(table: Mapping[int, int], default: int = 0) -> LearningSignature:
    sig = LearningSignature()
    register_function(sig, "f", table, default)
    # P(y, a): f(a) < y -- the semidecidable "f goes below y" question
    body = Lam("y", NAT, Lam("a", NAT,
               Const("lt")(f_at(_fv("a")), _fv("y"))))
    sig.register_predicate(PredicateSig("P", 1, body=body))
    return sig


def minimum_proof(sig: LearningSignature) -> Proof:
    lessf, notlessf, lessef, hasmin = minimum_formulas(sig)
    x, z = _fv("x"), _fv("z")

    motive = Implies(lessef(x), hasmin)  # A(x): Lessef(x) -> Hasminf

    base = ImpI(
        "w", lessef(numeral(0)),
        ExistsE(
            Assumption("w", lessef(numeral(0))), "z", "h1",
            ExistsI(
                "mu", And(notlessf(_fv("mu")), lessef(_fv("mu"))), f_at(z),
                AndI(
                    ForallI("y", Post(
                        "eq0-not-lt",
                        Atomic(Const("notb")(Const("lt")(f_at(_fv("y")), f_at(z)))),
                        (Post("le0-eq0",
                              Atomic(Const("eq")(f_at(z), numeral(0))),
                              (Assumption("h1", Atomic(Const("le")(f_at(z), numeral(0)))),)),))),
                    ExistsI("al", Atomic(Const("le")(f_at(_fv("al")), f_at(z))), z,
                            AtomicAxiom(Atomic(Const("le")(f_at(z), f_at(z)))))))))

    step = ForallI(
        "x",
        ImpI(
            "w1", motive,
            ImpI(
                "w2", lessef(Succ(x)),
                OrE(
                    ForallE(EM1("P"), Succ(x)),
                    "v2",
                    ExistsE(
                        Assumption("v2", lessf(Succ(x))), "z", "h2",
                        ImpE(
                            Assumption("w1", motive),
                            ExistsI(
                                "al", Atomic(Const("le")(f_at(_fv("al")), x)), z,
                                Post("lt-succ-le",
                                     Atomic(Const("le")(f_at(z), x)),
                                     (Assumption("h2", Atomic(Const("lt")(f_at(z), Succ(x)))),))))),
                    "v1",
                    ExistsI(
                        "mu", And(notlessf(_fv("mu")), lessef(_fv("mu"))), Succ(x),
                        AndI(Assumption("v1", notlessf(Succ(x))),
                             Assumption("w2", lessef(Succ(x)))))))))

    return ImpE(
        ForallE(Induction("x", motive, base, step), f_at(numeral(0))),
        ExistsI("al", Atomic(Const("le")(f_at(_fv("al")), f_at(numeral(0)))), numeral(0),
                AtomicAxiom(Atomic(Const("le")(f_at(numeral(0)), f_at(numeral(0)))))))


def minimum_item(table: Mapping[int, int], default: int = 0) -> CorpusItem:
    sig = minimum_sig(table, default)
    proof = minimum_proof(sig)
    checked = check_proof(proof, sig)
    return CorpusItem("minimum", sig, proof, checked, checked.conclusion,
                      extract(checked))


def coquand_proof(sig: LearningSignature) -> Proof:
    """For every a there is a point x with f(x) <= f(x + a)."""
    _, notlessf, lessef, hasmin = minimum_formulas(sig)
    a, z = _fv("a"), _fv("z")
    shifted = Const("add")(z, a)
    goal_body = Atomic(Const("le")(f_at(_fv("x")), f_at(Const("add")(_fv("x"), a))))
    w_formula = And(notlessf(_fv("mu")), lessef(_fv("mu")))

    return ExistsE(
        minimum_proof(sig), "mu", "w",
        ForallI(
            "a",
            ExistsE(
                AndE(1, Assumption("w", w_formula)), "z", "v",
                ExistsI(
                    "x", goal_body, z,
                    Post("le-not-lt-trans",
                         Atomic(Const("le")(f_at(z), f_at(shifted))),
                         (ForallE(AndE(0, Assumption("w", w_formula)), shifted),
                          Assumption("v", Atomic(Const("le")(f_at(z), _fv("mu")))),))))))


def coquand_item(table: Mapping[int, int], default: int = 0) -> CorpusItem:
    sig = minimum_sig(table, default)
    proof = coquand_proof(sig)
    checked = check_proof(proof, sig)
    return CorpusItem("coquand", sig, proof, checked, checked.conclusion,
                      extract(checked))


def staircase(steps: int, stride: int = 1,
              noise: Optional[Mapping[int, int]] = None) -> dict[int, int]:
    """f with f(j * stride) = steps - j down to zero; off-stride points may
    carry arbitrary finite noise.  On this family the extracted shift
    comparison witness coincides with the naive scan."""
    table = {j * stride: steps - j for j in range(steps + 1)}
    for k, v in (noise or {}).items():
        if k % stride != 0:
            table[k] = v
    return table


def brute_force_shift_witness(f: Callable[[int], int], a: int) -> int:
    """Independent oracle: n := 0; while f(n) > f(n+a): n := n + a."""
    n = 0
    while f(n) > f(n + a):
        n += a
    return n


# ---------------------------------------------------------------------------
# Bundled files
# ---------------------------------------------------------------------------

def em1_file_sig() -> LearningSignature:
    """File variant of the excluded-middle item: P with a kernel body
    (successor equation) so the proof file is self-contained."""
    sig = LearningSignature()
    body = Lam("x", NAT, Lam("y", NAT,
               Const("eq")(_fv("y"), Succ(_fv("x")))))
    sig.register_predicate(PredicateSig("P", 1, body=body))
    return sig


def proof_file_text(kind: str, table: Optional[Mapping[int, int]] = None) -> str:
    """The bundled proof files, generated from the same builders the tests
    exercise."""
    from .prooffile import print_proof
    from .syntax import print_term
    if kind == "em1":
        sig = em1_file_sig()
        proof = EM1("P")
        prelude = f"(prelude (defpred P 1 {print_term(sig.predicates['P'].body)}))"
        header = "; excluded middle for P(x, y): y = x + 1"
    elif kind in ("minimum", "coquand"):
        table = dict(table or {0: 3, 1: 2, 2: 1})
        sig = minimum_sig(table)
        proof = minimum_proof(sig) if kind == "minimum" else coquand_proof(sig)
        values = " ".join(str(table.get(i, 0)) for i in range(max(table) + 1))
        prelude = (f"(prelude (deffun f ({values}) 0)\n"
                   f"         (defpred P 1 {print_term(sig.predicates['P'].body)}))")
        header = ("; minimum value of f over the naturals" if kind == "minimum"
                  else "; a point where f does not drop under an a-shift")
    else:
        raise ValueError(kind)
    return f"{header}\n{prelude}\n(proof {print_proof(proof)})\n"


def write_bundled_files(root: str) -> None:
    """Regenerate the bundled proof, sample, procedure and critical files."""
    import os
    os.makedirs(os.path.join(root, "proofs"), exist_ok=True)
    os.makedirs(os.path.join(root, "samples"), exist_ok=True)
    os.makedirs(os.path.join(root, "procs"), exist_ok=True)
    for kind in ("em1", "minimum", "coquand"):
        with open(os.path.join(root, "proofs", f"{kind}.nd"), "w") as fh:
            fh.write(proof_file_text(kind))
    with open(os.path.join(root, "samples", "f1"), "w") as fh:
        fh.write("; finite table for f: values from 0 upward, default 0\n")
        fh.write("(table 3 2 1)\n")
    with open(os.path.join(root, "samples", "f2"), "w") as fh:
        fh.write("(table 5 4 3 2 1)\n")
    with open(os.path.join(root, "procs", "u1"), "w") as fh:
        fh.write("; unary procedure demanding f(3) = 5\n")
        fh.write("(proc (ordinal 1) (demand (lvl 0) 3 5))\n")
    with open(os.path.join(root, "procs", "omega"), "w") as fh:
        fh.write("(proc (ordinal omega)\n"
                 "  (demand (lvl 0) 0 1)\n"
                 "  (demand (lvl 1) 0 (+ 1 (at (lvl 0) 0))))\n")
    with open(os.path.join(root, "procs", "omega2"), "w") as fh:
        fh.write("(proc (ordinal (omega-pow 2))\n"
                 "  (demand (lvl 0 0) 0 2)\n"
                 "  (demand (lvl 0 1) 1 (+ 1 (at (lvl 0 0) 0)))\n"
                 "  (demand (lvl 1 0) 0 (+ (at (lvl 0 1) 1) (at (lvl 0 0) 0))))\n")
    with open(os.path.join(root, "procs", "omega-times-2"), "w") as fh:
        fh.write("(proc (ordinal omega-2)\n"
                 "  (demand (lvl 0 0) 0 2)\n"
                 "  (demand (lvl 1 0) 0 (+ 1 (at (lvl 0 0) 0)))\n"
                 "  (demand (lvl 0 0) 1 4))\n")
    with open(os.path.join(root, "procs", "criticals1.eps"), "w") as fh:
        fh.write("; choice axiom instance for P(x): x = 4, witnessed at 4\n")
        fh.write("(crit x (eq x 4) 4)\n(crit0 (succ (succ 0)))\n")

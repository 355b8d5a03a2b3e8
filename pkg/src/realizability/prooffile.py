"""Proof files: a prelude declaring functions and predicates followed by a
natural-deduction tree with rule heads.

::

    (prelude
      (deffun f (3 2 1) 0)            ; table values from 0, then default
      (defpred P 1 (lam (y Nat) (lam (a Nat) (atomterm ...)))))
    (proof (imp-i w <formula> <proof>))

Formulas and terms inside proofs use the atom shorthand (bare names are
resolved against quantifier binders, then constants)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .kernel import NAT, Term, Type
from .logic import (
    AndE, AndI, Assumption, AtomicAxiom, ChiAxiom, EM1, ExistsE, ExistsI,
    ForallE, ForallI, Formula, ImpE, ImpI, Induction, OrE, OrIL, OrIR,
    PhiAxiom, Post, Proof, _atom_term, formula_of_sexpr, sexpr_of_formula,
)
from .sexpr import SExpr, SyntaxError_, parse_all, unparse
from .states import LearningSignature, PredicateSig
from .syntax import term_of_sexpr, sexpr_of_term


@dataclass
class ProofFile:
    sig: LearningSignature
    proof: Proof
    source: str


def load_prelude(items: list[SExpr], sig: Optional[LearningSignature] = None,
                 function_tables: Optional[dict[str, dict[int, int]]] = None,
                 ) -> LearningSignature:
    sig = sig or LearningSignature()
    overrides = function_tables or {}
    for item in items:
        if not (isinstance(item, list) and item and isinstance(item[0], str)):
            raise SyntaxError_(f"bad prelude entry {unparse(item)}", 0)
        head = item[0]
        if head == "deffun" and len(item) in (3, 4) and isinstance(item[1], str):
            name = item[1]
            if not isinstance(item[2], list):
                raise SyntaxError_("deffun needs a value list", 0)
            table = {i: int(v) for i, v in enumerate(item[2])}
            default = int(item[3]) if len(item) == 4 else 0
            if name in overrides:
                table, default = dict(overrides[name]), 0
            frozen = table
            sig.register(name, NAT >> NAT,
                         lambda n, _t=frozen, _d=default: _t.get(n, _d))
        elif head == "defpred" and len(item) == 4 and isinstance(item[1], str):
            arity = int(item[2])
            body = term_of_sexpr(item[3])
            sig.register_predicate(PredicateSig(item[1], arity, body=body))
        else:
            raise SyntaxError_(f"bad prelude entry {unparse(item)}", 0)
    return sig


def parse_proof_file(src: str,
                     function_tables: Optional[dict[str, dict[int, int]]] = None,
                     ) -> ProofFile:
    items = parse_all(src)
    sig = LearningSignature()
    proof: Optional[Proof] = None
    for item in items:
        if isinstance(item, list) and item and item[0] == "prelude":
            load_prelude(item[1:], sig, function_tables)
        elif isinstance(item, list) and item and item[0] == "proof":
            if len(item) != 2:
                raise SyntaxError_("(proof ...) takes one tree", 0)
            proof = proof_of_sexpr(item[1], sig, {})
        else:
            raise SyntaxError_(f"bad top-level entry {unparse(item)}", 0)
    if proof is None:
        raise SyntaxError_("no (proof ...) clause", 0)
    return ProofFile(sig, proof, src)


def _formula(e: SExpr, sig: LearningSignature, bound: dict[str, Type]) -> Formula:
    return formula_of_sexpr(e, sig, bound)


def _term(e: SExpr, sig: LearningSignature, bound: dict[str, Type]) -> Term:
    return _atom_term(e, bound, sig)


def proof_of_sexpr(e: SExpr, sig: LearningSignature,
                   bound: dict[str, Type]) -> Proof:
    if not (isinstance(e, list) and e and isinstance(e[0], str)):
        raise SyntaxError_(f"bad proof node {unparse(e)}", 0)
    head, rest = e[0], e[1:]

    def sub(x: SExpr, extra: Optional[dict[str, Type]] = None) -> Proof:
        inner = dict(bound)
        inner.update(extra or {})
        return proof_of_sexpr(x, sig, inner)

    match head:
        case "hyp" if len(rest) == 2 and isinstance(rest[0], str):
            return Assumption(rest[0], _formula(rest[1], sig, bound))
        case "and-i" if len(rest) == 2:
            return AndI(sub(rest[0]), sub(rest[1]))
        case "and-e0" | "and-e1" if len(rest) == 1:
            return AndE(0 if head == "and-e0" else 1, sub(rest[0]))
        case "imp-i" if len(rest) == 3 and isinstance(rest[0], str):
            return ImpI(rest[0], _formula(rest[1], sig, bound), sub(rest[2]))
        case "imp-e" if len(rest) == 2:
            return ImpE(sub(rest[0]), sub(rest[1]))
        case "or-il" if len(rest) == 2:
            return OrIL(sub(rest[0]), _formula(rest[1], sig, bound))
        case "or-ir" if len(rest) == 2:
            return OrIR(_formula(rest[0], sig, bound), sub(rest[1]))
        case "or-e" if len(rest) == 3:
            left, right = rest[1], rest[2]
            if not (isinstance(left, list) and len(left) == 2
                    and isinstance(left[0], str)
                    and isinstance(right, list) and len(right) == 2
                    and isinstance(right[0], str)):
                raise SyntaxError_("or-e branches are (label proof)", 0)
            return OrE(sub(rest[0]), left[0], sub(left[1]),
                       right[0], sub(right[1]))
        case "all-i" if len(rest) == 2 and isinstance(rest[0], str):
            return ForallI(rest[0], sub(rest[1], {rest[0]: NAT}))
        case "all-e" if len(rest) == 2:
            return ForallE(sub(rest[0]), _term(rest[1], sig, bound))
        case "ex-i" if len(rest) == 4 and isinstance(rest[0], str):
            var = rest[0]
            inner = dict(bound)
            inner[var] = NAT
            body = _formula(rest[1], sig, inner)
            witness = _term(rest[2], sig, bound)
            return ExistsI(var, body, witness, sub(rest[3]))
        case "ex-e" if len(rest) == 3:
            binder = rest[1]
            if not (isinstance(binder, list) and len(binder) == 2
                    and all(isinstance(x, str) for x in binder)):
                raise SyntaxError_("ex-e binder is (eigen label)", 0)
            return ExistsE(sub(rest[0]), binder[0], binder[1],
                           sub(rest[2], {binder[0]: NAT}))
        case "ind" if len(rest) == 4 and isinstance(rest[0], str):
            var = rest[0]
            inner = dict(bound)
            inner[var] = NAT
            motive = _formula(rest[1], sig, inner)
            return Induction(var, motive, sub(rest[2]), sub(rest[3]))
        case "post" if len(rest) >= 3 and isinstance(rest[0], str):
            concl = _formula(rest[1], sig, bound)
            return Post(rest[0], concl, tuple(sub(x) for x in rest[2:]))
        case "atomic" if len(rest) == 1:
            return AtomicAxiom(_formula(rest[0], sig, bound))
        case "em1" if len(rest) == 1 and isinstance(rest[0], str):
            return EM1(rest[0])
        case "chi-ax" if len(rest) == 3 and isinstance(rest[0], str):
            if not isinstance(rest[1], list):
                raise SyntaxError_("chi-ax arguments are a list", 0)
            args = tuple(_term(x, sig, bound) for x in rest[1])
            return ChiAxiom(rest[0], args, _term(rest[2], sig, bound))
        case "phi-ax" if len(rest) == 2 and isinstance(rest[0], str):
            if not isinstance(rest[1], list):
                raise SyntaxError_("phi-ax arguments are a list", 0)
            args = tuple(_term(x, sig, bound) for x in rest[1])
            return PhiAxiom(rest[0], args)
    raise SyntaxError_(f"bad proof node {unparse(e)}", 0)


def sexpr_of_proof(p: Proof) -> SExpr:
    match p:
        case Assumption(label, a):
            return ["hyp", label, sexpr_of_formula(a)]
        case AndI(l, r):
            return ["and-i", sexpr_of_proof(l), sexpr_of_proof(r)]
        case AndE(i, sub):
            return [f"and-e{i}", sexpr_of_proof(sub)]
        case ImpI(label, ant, sub):
            return ["imp-i", label, sexpr_of_formula(ant), sexpr_of_proof(sub)]
        case ImpE(f, a):
            return ["imp-e", sexpr_of_proof(f), sexpr_of_proof(a)]
        case OrIL(sub, right):
            return ["or-il", sexpr_of_proof(sub), sexpr_of_formula(right)]
        case OrIR(left, sub):
            return ["or-ir", sexpr_of_formula(left), sexpr_of_proof(sub)]
        case OrE(s, xl, l, xr, r):
            return ["or-e", sexpr_of_proof(s), [xl, sexpr_of_proof(l)],
                    [xr, sexpr_of_proof(r)]]
        case ForallI(x, sub):
            return ["all-i", x, sexpr_of_proof(sub)]
        case ForallE(sub, t):
            return ["all-e", sexpr_of_proof(sub), sexpr_of_term(t)]
        case ExistsI(x, body, t, sub):
            return ["ex-i", x, sexpr_of_formula(body), sexpr_of_term(t),
                    sexpr_of_proof(sub)]
        case ExistsE(s, eigen, label, sub):
            return ["ex-e", sexpr_of_proof(s), [eigen, label], sexpr_of_proof(sub)]
        case Induction(x, motive, base, step):
            return ["ind", x, sexpr_of_formula(motive), sexpr_of_proof(base),
                    sexpr_of_proof(step)]
        case Post(rule_id, concl, premises):
            return ["post", rule_id, sexpr_of_formula(concl)] + [
                sexpr_of_proof(q) for q in premises]
        case AtomicAxiom(a):
            return ["atomic", sexpr_of_formula(a)]
        case EM1(pred):
            return ["em1", pred]
        case ChiAxiom(pred, args, witness):
            return ["chi-ax", pred, [sexpr_of_term(t) for t in args],
                    sexpr_of_term(witness)]
        case PhiAxiom(pred, args):
            return ["phi-ax", pred, [sexpr_of_term(t) for t in args]]
    raise TypeError(p)


def print_proof(p: Proof) -> str:
    return unparse(sexpr_of_proof(p))

"""Surface syntax for kernel types, terms and state literals.

Grammar (UTF-8 s-expressions)::

    type  ::= Nat | Bool | State | (-> type type ...) | (* type type) | (seq* type)
    term  ::= <decimal numeral> | true | false | <identifier>
            | (lam (x type) term) | (app term term) | (pair term term)
            | (proj0 term) | (proj1 term) | (succ term)
            | (rec type) | (if type) | (const name) | (state <state>)
            | (seq type term ...) | (br type type) | (brguard type type)
            | (y type)
    state ::= {(P n ... m) ...}

Parser and printer round-trip exactly.
"""

from __future__ import annotations

from .kernel import (
    BOOL, FALSE, NAT, STATE, TRUE, App, Arrow, Atom, BR, BRGuard, Const,
    FalseC, If, KnowledgeStateLike, Lam, Pair, Proj, Product, Rec, SeqLit,
    SeqOf, StateConst, Succ, Term, TrueC, Type, Var, Y, ZeroC, numeral,
    numeral_value,
)
from .sexpr import SExpr, SyntaxError_, parse_one, unparse


def parse_type(e: SExpr) -> Type:
    if e == "Nat":
        return NAT
    if e == "Bool":
        return BOOL
    if e == "State":
        return STATE
    if isinstance(e, list) and e:
        head = e[0]
        if head == "->":
            if len(e) < 3:
                raise SyntaxError_("-> needs at least two types", 0)
            parts = [parse_type(x) for x in e[1:]]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Arrow(p, out)
            return out
        if head == "*" and len(e) == 3:
            return Product(parse_type(e[1]), parse_type(e[2]))
        if head == "seq*" and len(e) == 2:
            return SeqOf(parse_type(e[1]))
    raise SyntaxError_(f"bad type: {unparse(e)}", 0)


def print_type(t: Type) -> SExpr:
    if t == NAT:
        return "Nat"
    if t == BOOL:
        return "Bool"
    if t == STATE:
        return "State"
    if isinstance(t, Arrow):
        return ["->", print_type(t.dom), print_type(t.cod)]
    if isinstance(t, Product):
        return ["*", print_type(t.left), print_type(t.right)]
    if isinstance(t, SeqOf):
        return ["seq*", print_type(t.elem)]
    raise ValueError(f"unprintable type {t!r}")


def parse_state_sexpr(e: SExpr) -> KnowledgeStateLike:
    if not (isinstance(e, list) and e and e[0] == "#braces"):
        raise SyntaxError_(f"bad state literal: {unparse(e)}", 0)
    atoms = []
    for item in e[1:]:
        if not (isinstance(item, list) and len(item) >= 3
                and isinstance(item[0], str)
                and all(isinstance(x, int) for x in item[1:])):
            raise SyntaxError_(f"bad atom: {unparse(item)}", 0)
        atoms.append(Atom(item[0], tuple(item[1:-1]), item[-1]))
    return KnowledgeStateLike(tuple(atoms))


def print_state_sexpr(s: KnowledgeStateLike) -> SExpr:
    return ["#braces"] + [[a.pred, *a.args, a.witness] for a in s.atoms]


def parse_state(src: str) -> KnowledgeStateLike:
    return parse_state_sexpr(parse_one(src))


def print_state(s: KnowledgeStateLike) -> str:
    return unparse(print_state_sexpr(s))


def term_of_sexpr(e: SExpr, bound: dict[str, Type] | None = None) -> Term:
    bound = bound or {}
    if isinstance(e, int):
        return numeral(e)
    if e == "true":
        return TRUE
    if e == "false":
        return FALSE
    if isinstance(e, str):
        if e not in bound:
            raise SyntaxError_(f"unbound variable {e}", 0)
        return Var(e, bound[e])
    if not (isinstance(e, list) and e):
        raise SyntaxError_(f"bad term: {unparse(e)}", 0)
    head = e[0]
    if head == "lam" and len(e) == 3 and isinstance(e[1], list) and len(e[1]) == 2:
        name, ty = e[1][0], parse_type(e[1][1])
        if not isinstance(name, str):
            raise SyntaxError_("binder must be an identifier", 0)
        inner = dict(bound)
        inner[name] = ty
        return Lam(name, ty, term_of_sexpr(e[2], inner))
    if head == "app" and len(e) >= 3:
        out = term_of_sexpr(e[1], bound)
        for arg in e[2:]:
            out = App(out, term_of_sexpr(arg, bound))
        return out
    if head == "pair" and len(e) == 3:
        return Pair(term_of_sexpr(e[1], bound), term_of_sexpr(e[2], bound))
    if head == "proj0" and len(e) == 2:
        return Proj(0, term_of_sexpr(e[1], bound))
    if head == "proj1" and len(e) == 2:
        return Proj(1, term_of_sexpr(e[1], bound))
    if head == "succ" and len(e) == 2:
        return Succ(term_of_sexpr(e[1], bound))
    if head == "rec" and len(e) == 2:
        return Rec(parse_type(e[1]))
    if head == "if" and len(e) == 2:
        return If(parse_type(e[1]))
    if head == "const" and len(e) == 2 and isinstance(e[1], str):
        return Const(e[1])
    if head == "state" and len(e) == 2:
        return StateConst(parse_state_sexpr(e[1]))
    if head == "seq" and len(e) >= 2:
        elem = parse_type(e[1])
        return SeqLit(elem, tuple(term_of_sexpr(x, bound) for x in e[2:]))
    if head == "br" and len(e) == 3:
        return BR(parse_type(e[1]), parse_type(e[2]))
    if head == "brguard" and len(e) == 3:
        return BRGuard(parse_type(e[1]), parse_type(e[2]))
    if head == "y" and len(e) == 2:
        return Y(parse_type(e[1]))
    raise SyntaxError_(f"bad term: {unparse(e)}", 0)


def sexpr_of_term(t: Term) -> SExpr:
    n = numeral_value(t)
    if n is not None:
        return n
    match t:
        case Var(name, _):
            return name
        case ZeroC():
            return 0
        case TrueC():
            return "true"
        case FalseC():
            return "false"
        case Succ(a):
            return ["succ", sexpr_of_term(a)]
        case Lam(x, ty, body):
            return ["lam", [x, print_type(ty)], sexpr_of_term(body)]
        case App(f, a):
            return ["app", sexpr_of_term(f), sexpr_of_term(a)]
        case Pair(l, r):
            return ["pair", sexpr_of_term(l), sexpr_of_term(r)]
        case Proj(i, a):
            return [f"proj{i}", sexpr_of_term(a)]
        case Rec(ty):
            return ["rec", print_type(ty)]
        case If(ty):
            return ["if", print_type(ty)]
        case Const(name):
            return ["const", name]
        case StateConst(s):
            return ["state", print_state_sexpr(s)]
        case SeqLit(elem, items):
            return ["seq", print_type(elem)] + [sexpr_of_term(i) for i in items]
        case BR(tau, sigma):
            return ["br", print_type(tau), print_type(sigma)]
        case BRGuard(tau, sigma):
            return ["brguard", print_type(tau), print_type(sigma)]
        case Y(ty):
            return ["y", print_type(ty)]
    raise ValueError(f"unprintable term {t!r}")


def parse_term(src: str, bound: dict[str, Type] | None = None) -> Term:
    return term_of_sexpr(parse_one(src), bound)


def print_term(t: Term) -> str:
    return unparse(sexpr_of_term(t))

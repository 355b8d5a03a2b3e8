"""First-order epsilon substitution driven by update procedures.

Expressions are first-order arithmetic with choice terms; a substitution
assigns numerals to canonical choice terms (closed ones without closed
proper choice subterms), defaulting to zero.  Normalization replaces
canonical choice subterms by their assigned values until none remain;
the repair process scans critical formulas, learns the least witness for
the first failing one, and applies the correction with the controlled
(house-of-cards) update until every critical formula holds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .kernel import FuelExhausted, KernelError
from .sexpr import SExpr, SyntaxError_, parse_all, unparse
from .update import (
    Family, LearningRun, OmegaPow, UpdateProcedure, learning_process,
)


class EpsilonError(KernelError):
    pass


class MalformedCritical(EpsilonError):
    pass


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsExpr:
    pass


@dataclass(frozen=True)
class EVar(EpsExpr):
    name: str


@dataclass(frozen=True)
class ENum(EpsExpr):
    value: int


@dataclass(frozen=True)
class ESucc(EpsExpr):
    arg: EpsExpr


@dataclass(frozen=True)
class EEps(EpsExpr):
    """The choice term: the least witness of the body, by intention."""

    var: str
    body: "EForm"


@dataclass(frozen=True)
class EForm:
    pass


@dataclass(frozen=True)
class EPred(EForm):
    name: str
    args: tuple[EpsExpr, ...]


@dataclass(frozen=True)
class ENot(EForm):
    body: EForm


@dataclass(frozen=True)
class EAnd(EForm):
    left: EForm
    right: EForm


@dataclass(frozen=True)
class EImp(EForm):
    left: EForm
    right: EForm


EObj = Union[EpsExpr, EForm]

BASE_PREDICATES: dict[str, Callable[..., bool]] = {
    "eq": lambda a, b: a == b,
    "le": lambda a, b: a <= b,
    "lt": lambda a, b: a < b,
}


def enum(value: int) -> EpsExpr:
    return ENum(value)


def efree_vars(e: EObj) -> frozenset[str]:
    match e:
        case EVar(name):
            return frozenset((name,))
        case ENum(_):
            return frozenset()
        case ESucc(a):
            return efree_vars(a)
        case EEps(x, body):
            return efree_vars(body) - {x}
        case EPred(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= efree_vars(a)
            return out
        case ENot(b):
            return efree_vars(b)
        case EAnd(l, r) | EImp(l, r):
            return efree_vars(l) | efree_vars(r)
    raise TypeError(e)


def esubst(e: EObj, x: str, value: EpsExpr) -> EObj:
    match e:
        case EVar(name):
            return value if name == x else e
        case ENum(_):
            return e
        case ESucc(a):
            return ESucc(esubst(a, x, value))
        case EEps(y, body):
            if y == x:
                return e
            return EEps(y, esubst(body, x, value))
        case EPred(name, args):
            return EPred(name, tuple(esubst(a, x, value) for a in args))
        case ENot(b):
            return ENot(esubst(b, x, value))
        case EAnd(l, r):
            return EAnd(esubst(l, x, value), esubst(r, x, value))
        case EImp(l, r):
            return EImp(esubst(l, x, value), esubst(r, x, value))
    raise TypeError(e)


def eps_subterms(e: EObj) -> list[EEps]:
    out: list[EEps] = []

    def walk(o: EObj) -> None:
        match o:
            case EEps(_, body):
                out.append(o)
                walk(body)
            case ESucc(a):
                walk(a)
            case EPred(_, args):
                for a in args:
                    walk(a)
            case ENot(b):
                walk(b)
            case EAnd(l, r) | EImp(l, r):
                walk(l)
                walk(r)
            case _:
                pass

    walk(e)
    return out


def is_canonical(e: EEps) -> bool:
    """Closed, with no closed proper choice subterms."""
    if efree_vars(e):
        return False
    return all(efree_vars(sub) for sub in eps_subterms(e) if sub is not e)


# ---------------------------------------------------------------------------
# Substitutions and normalization
# ---------------------------------------------------------------------------

@dataclass
class EpsSubstitution:
    """Finite map from canonical choice terms to numerals, default 0."""

    assignment: dict[EEps, int]

    def __init__(self, assignment: Optional[dict[EEps, int]] = None):
        self.assignment = dict(assignment or {})
        for e in self.assignment:
            if not is_canonical(e):
                raise EpsilonError(f"non-canonical domain term {e!r}")

    def value(self, e: EEps) -> int:
        return self.assignment.get(e, 0)

    def items(self):
        return self.assignment.items()


def _first_canonical(e: EObj) -> Optional[EEps]:
    """Innermost-leftmost canonical choice subterm, if any."""
    for sub in eps_subterms(e):
        if is_canonical(sub):
            inner = [t for t in eps_subterms(sub) if t is not sub and is_canonical(t)]
            if not inner:
                return sub
    return None


def eps_normalize(e: EObj, s: EpsSubstitution, fuel: int = 10_000) -> EObj:
    """The substitution normal form: no canonical choice subterms remain."""
    for _ in range(fuel):
        target = _first_canonical(e)
        if target is None:
            return e
        e = _replace_once(e, target, ENum(s.value(target)))
    raise FuelExhausted("epsilon normalization did not terminate")


def _replace_once(e: EObj, target: EEps, value: EpsExpr) -> EObj:
    replaced = False

    def walk(o: EObj) -> EObj:
        nonlocal replaced
        if replaced:
            return o
        if o == target:
            replaced = True
            return value
        match o:
            case ESucc(a):
                return ESucc(walk(a))
            case EPred(name, args):
                return EPred(name, tuple(walk(a) for a in args))
            case ENot(b):
                return ENot(walk(b))
            case EAnd(l, r):
                out_l = walk(l)
                return EAnd(out_l, walk(r))
            case EImp(l, r):
                out_l = walk(l)
                return EImp(out_l, walk(r))
            case EEps(x, body):
                return EEps(x, walk(body))
            case _:
                return o

    return walk(e)


def term_value(e: EpsExpr) -> int:
    match e:
        case ENum(v):
            return v
        case ESucc(a):
            return term_value(a) + 1
    raise EpsilonError(f"not a closed choice-free term: {e!r}")


def formula_truth(f: EForm, preds: Optional[dict[str, Callable[..., bool]]] = None) -> bool:
    table = {**BASE_PREDICATES, **(preds or {})}
    match f:
        case EPred(name, args):
            if name not in table:
                raise EpsilonError(f"unknown predicate {name}")
            return bool(table[name](*[term_value(a) for a in args]))
        case ENot(b):
            return not formula_truth(b, preds)
        case EAnd(l, r):
            return formula_truth(l, preds) and formula_truth(r, preds)
        case EImp(l, r):
            return (not formula_truth(l, preds)) or formula_truth(r, preds)
    raise TypeError(f)


# ---------------------------------------------------------------------------
# Critical formulas and their update procedure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Critical:
    """A(t/x) -> A(eps x A / x)."""

    body: EForm
    var: str
    term: EpsExpr

    def formula(self) -> EForm:
        eps = EEps(self.var, self.body)
        return EImp(esubst(self.body, self.var, self.term),
                    esubst(self.body, self.var, eps))


@dataclass(frozen=True)
class CriticalZero:
    """not s = 0 -> s = S(eps x (s = S x))."""

    term: EpsExpr

    def formula(self) -> EForm:
        eps = EEps("x", EPred("eq", (self.term, ESucc(EVar("x")))))
        return EImp(ENot(EPred("eq", (self.term, ENum(0)))),
                    EPred("eq", (self.term, ESucc(eps))))


CriticalLike = Union[Critical, CriticalZero]


class EpsilonRegistry:
    """First-appearance enumeration of canonical choice terms per rank.

    The rank of a choice term is one plus the largest rank of the choice
    subterms of its instantiated body, probed over small witnesses; the
    family level for a term of rank r is r - 1."""

    def __init__(self, preds: Optional[dict[str, Callable[..., bool]]] = None,
                 probe: int = 4):
        self.preds = preds
        self.probe = probe
        self.by_term: dict[EEps, tuple[int, int]] = {}
        self.by_slot: dict[tuple[int, int], EEps] = {}
        self._next_index: dict[int, "itertools.count"] = {}

    def rank(self, e: EEps) -> int:
        inner_ranks = [0]
        for v in range(self.probe + 1):
            inst = esubst(e.body, e.var, ENum(v))
            for sub in eps_subterms(inst):
                if is_canonical(sub):
                    inner_ranks.append(self.rank(sub))
        return 1 + max(inner_ranks)

    def slot(self, e: EEps) -> tuple[int, int]:
        if e not in self.by_term:
            level = self.rank(e) - 1
            counter = self._next_index.setdefault(level, itertools.count())
            slot = (level, next(counter))
            self.by_term[e] = slot
            self.by_slot[slot] = e
        return self.by_term[e]

    def substitution(self, f: Family) -> EpsSubstitution:
        values = {}
        for (code, n), m in f.values:
            e = self.by_slot.get((code[0], n))
            if e is not None and m != 0:
                values[e] = m
        return EpsSubstitution(values)

    def family_substitution(self, f: Family) -> EpsSubstitution:
        return self.substitution(f)

    def value_at(self, f: Family, e: EEps) -> int:
        level, idx = self.slot(e)
        return f.get((level,), idx)


def critical_update_procedure(criticals: Sequence[CriticalLike],
                              registry: Optional[EpsilonRegistry] = None,
                              preds: Optional[dict[str, Callable[..., bool]]] = None,
                              ) -> tuple[UpdateProcedure, EpsilonRegistry]:
    """Scan the critical formulas in order under the substitution coded by
    the family; the first failing formula yields the least-witness
    correction at its choice term's slot."""
    registry = registry or EpsilonRegistry(preds)
    for c in criticals:
        if not isinstance(c, (Critical, CriticalZero)):
            raise MalformedCritical(f"not a critical formula: {c!r}")
        if isinstance(c, Critical) and efree_vars(c.formula()):
            raise MalformedCritical("critical formulas must be closed")
        if isinstance(c, CriticalZero) and efree_vars(c.term):
            raise MalformedCritical("critical formulas must be closed")

    def norm_truth(f: EForm, sub: EpsSubstitution) -> bool:
        out = eps_normalize(f, sub)
        assert isinstance(out, EForm)
        return formula_truth(out, preds)

    def run(fam: Family) -> Optional[tuple[tuple, int, int]]:
        class _FamilySub(EpsSubstitution):
            def __init__(self):
                self.assignment = {}

            def value(self, e: EEps) -> int:
                return registry.value_at(fam, e)

        sub = _FamilySub()
        for c in criticals:
            formula = c.formula()
            if norm_truth(formula, sub):
                continue
            if isinstance(c, Critical):
                t_val = term_value(eps_normalize(c.term, sub))
                body_norm = eps_normalize(c.body, sub)

                def instance_true(i: int) -> bool:
                    inst = esubst(body_norm, c.var, ENum(i))
                    return norm_truth(inst, sub)

                least = next(i for i in range(t_val + 1) if instance_true(i))
                eps = EEps(c.var, body_norm)
                assert isinstance(body_norm, EForm)
                level, idx = registry.slot(eps)
                return ((level,), idx, least)
            s_val = term_value(eps_normalize(c.term, sub))
            if s_val == 0:
                raise MalformedCritical("zero-successor critical false at zero")
            body = EPred("eq", (ENum(s_val), ESucc(EVar("x"))))
            eps = EEps("x", eps_normalize(
                EPred("eq", (c.term, ESucc(EVar("x")))), sub))
            assert isinstance(eps.body, EForm)
            level, idx = registry.slot(eps)
            return ((level,), idx, s_val - 1)
        return None

    return UpdateProcedure(OmegaPow(1), run, "criticals"), registry


@dataclass
class HProcessResult:
    substitution: EpsSubstitution
    run: LearningRun
    registry: EpsilonRegistry


def h_process(criticals: Sequence[CriticalLike],
              preds: Optional[dict[str, Callable[..., bool]]] = None,
              max_steps: int = 10_000) -> HProcessResult:
    """Repair the default substitution until every critical formula holds:
    the learning process of the criticals' update procedure, decoded back
    into a substitution."""
    proc, registry = critical_update_procedure(criticals, preds=preds)
    run = learning_process(proc, mode="transfinite", max_steps=max_steps)
    sub = registry.substitution(run.zero)
    for c in criticals:
        out = eps_normalize(c.formula(), sub)
        assert isinstance(out, EForm)
        if not formula_truth(out, preds):
            raise AssertionError("repair finished with a false critical formula")
    return HProcessResult(sub, run, registry)


# ---------------------------------------------------------------------------
# Surface syntax for critical-formula files
# ---------------------------------------------------------------------------

def _term_of_sexpr(e: SExpr, bound: frozenset[str]) -> EpsExpr:
    if isinstance(e, int):
        return ENum(e)
    if isinstance(e, str):
        if e in bound:
            return EVar(e)
        raise SyntaxError_(f"unbound epsilon variable {e}", 0)
    if isinstance(e, list) and e:
        if e[0] == "succ" and len(e) == 2:
            return ESucc(_term_of_sexpr(e[1], bound))
        if e[0] == "eps" and len(e) == 3 and isinstance(e[1], str):
            return EEps(e[1], _form_of_sexpr(e[2], bound | {e[1]}))
    raise SyntaxError_(f"bad epsilon term {unparse(e)}", 0)


def _form_of_sexpr(e: SExpr, bound: frozenset[str]) -> EForm:
    if not (isinstance(e, list) and e and isinstance(e[0], str)):
        raise SyntaxError_(f"bad epsilon formula {unparse(e)}", 0)
    head = e[0]
    if head == "not" and len(e) == 2:
        return ENot(_form_of_sexpr(e[1], bound))
    if head == "and" and len(e) == 3:
        return EAnd(_form_of_sexpr(e[1], bound), _form_of_sexpr(e[2], bound))
    if head == "imp" and len(e) == 3:
        return EImp(_form_of_sexpr(e[1], bound), _form_of_sexpr(e[2], bound))
    return EPred(head, tuple(_term_of_sexpr(a, bound) for a in e[1:]))


def parse_criticals(src: str) -> list[CriticalLike]:
    """Critical-formula files: ``(crit <var> <body> <term>)`` clauses for
    the choice axiom and ``(crit0 <term>)`` for the zero-successor one."""
    out: list[CriticalLike] = []
    for e in parse_all(src):
        if not (isinstance(e, list) and e):
            raise SyntaxError_(f"bad critical clause {unparse(e)}", 0)
        if e[0] == "crit" and len(e) == 4 and isinstance(e[1], str):
            body = _form_of_sexpr(e[2], frozenset((e[1],)))
            term = _term_of_sexpr(e[3], frozenset())
            out.append(Critical(body, e[1], term))
        elif e[0] == "crit0" and len(e) == 2:
            out.append(CriticalZero(_term_of_sexpr(e[1], frozenset())))
        else:
            raise SyntaxError_(f"bad critical clause {unparse(e)}", 0)
    return out

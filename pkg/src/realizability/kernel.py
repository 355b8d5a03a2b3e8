"""Typed lambda calculus kernel: terms, types, reduction, evaluation.

The calculus is simply typed lambda calculus with naturals, booleans,
primitive recursion and conditionals in all types, extended with

* an atomic type of knowledge states and state constants,
* "functional" constant signatures (each constant rewrites closed normal
  argument tuples to a unique closed normal result),
* finite-sequence types with bar recursion, and
* a fixed point combinator for the PCF-style fragment.

Reduction comes in two flavours: a reference small-step reducer with a
pluggable redex-selection strategy (used by tests and by everything that
needs syntactic normal forms), and a fast environment machine
(:func:`evaluate`) used on the hot paths where only closed atomic results
are observed.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Union

sys.setrecursionlimit(100_000)


class KernelError(Exception):
    """Base class for kernel failures."""


class TypeMismatch(KernelError):
    pass


class UnboundVariable(KernelError):
    pass


class UnknownConstant(KernelError):
    pass


class FuelExhausted(KernelError):
    """Raised when a reduction or evaluation exceeds its step budget."""


class MalformedApplication(KernelError):
    pass


DEFAULT_FUEL = 10**6


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Type:
    def __rshift__(self, other: "Type") -> "Type":
        return Arrow(self, other)


@dataclass(frozen=True)
class NatT(Type):
    def __repr__(self) -> str:
        return "Nat"


@dataclass(frozen=True)
class BoolT(Type):
    def __repr__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class StateT(Type):
    def __repr__(self) -> str:
        return "State"


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type

    def __repr__(self) -> str:
        return f"({self.dom!r} -> {self.cod!r})"


@dataclass(frozen=True)
class Product(Type):
    left: Type
    right: Type

    def __repr__(self) -> str:
        return f"({self.left!r} * {self.right!r})"


@dataclass(frozen=True)
class SeqOf(Type):
    """Finite sequence type, used only by bar recursion."""

    elem: Type

    def __repr__(self) -> str:
        return f"({self.elem!r})*"


NAT = NatT()
BOOL = BoolT()
STATE = StateT()


def arrows(*ts: Type) -> Type:
    """Right-associated arrow type ``t1 -> t2 -> ... -> tn``."""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def seq_of(elem: Type, coded: bool = False) -> Type:
    """Sequence type of ``elem``; with ``coded`` the Nat* = Nat flattening
    convention is applied (type-level accounting only, off by default)."""
    if coded and elem == NAT:
        return NAT
    return SeqOf(elem)


def atomic(t: Type) -> bool:
    return isinstance(t, (NatT, BoolT, StateT))


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    def __call__(self, *args: "Term") -> "Term":
        out: Term = self
        for a in args:
            out = App(out, a)
        return out


@dataclass(frozen=True)
class Var(Term):
    name: str
    type: Type


@dataclass(frozen=True)
class ZeroC(Term):
    pass


@dataclass(frozen=True)
class Succ(Term):
    arg: Term


@dataclass(frozen=True)
class TrueC(Term):
    pass


@dataclass(frozen=True)
class FalseC(Term):
    pass


@dataclass(frozen=True)
class If(Term):
    type: Type  # the branch type T; constant of type Bool -> T -> T -> T


@dataclass(frozen=True)
class Rec(Term):
    type: Type  # the motive T; constant of type T -> (Nat -> T -> T) -> Nat -> T


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Lam(Term):
    var: str
    var_type: Type
    body: Term


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Proj(Term):
    index: int  # 0 or 1
    arg: Term


@dataclass(frozen=True)
class Const(Term):
    """Named constant resolved against a registered Signature."""

    name: str


@dataclass(frozen=True)
class StateConst(Term):
    state: "KnowledgeStateLike"


@dataclass(frozen=True)
class SeqLit(Term):
    """Finite sequence literal of element type ``elem``."""

    elem: Type
    items: tuple[Term, ...]


@dataclass(frozen=True)
class BR(Term):
    """Bar recursion constant BR_{tau,sigma}."""

    tau: Type
    sigma: Type


@dataclass(frozen=True)
class BRGuard(Term):
    """Auxiliary guard constant for bar recursion (the paper's Psi)."""

    tau: Type
    sigma: Type


@dataclass(frozen=True)
class Y(Term):
    """Fixed point combinator of type (A -> A) -> A."""

    type: Type


ZERO = ZeroC()
TRUE = TrueC()
FALSE = FalseC()


def numeral(value: int) -> Term:
    """Canonical numeral S^value(0)."""
    if value < 0:
        raise ValueError("numerals are non-negative")
    if value > 200_000:
        raise ValueError(f"refusing to materialize numeral of size {value}")
    t: Term = ZERO
    for _ in range(value):
        t = Succ(t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    """The integer behind a numeral, or None if t is not a numeral."""
    n = 0
    while isinstance(t, Succ):
        n += 1
        t = t.arg
    return n if isinstance(t, ZeroC) else None


def boolean(value: bool) -> Term:
    return TRUE if value else FALSE


# ---------------------------------------------------------------------------
# Knowledge states (structure shared with the states module)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Atom:
    """Verified witness record: pred applied to args has witness m."""

    pred: str
    args: tuple[int, ...]
    witness: int


@dataclass(frozen=True)
class KnowledgeStateLike:
    """Finite consistent set of atoms; canonical tuple ordering."""

    atoms: tuple[Atom, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(sorted(set(self.atoms))))
        seen: dict[tuple[str, tuple[int, ...]], int] = {}
        for a in self.atoms:
            key = (a.pred, a.args)
            if key in seen and seen[key] != a.witness:
                raise ValueError(f"inconsistent atoms for {key}")
            seen[key] = a.witness

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __bool__(self) -> bool:
        return bool(self.atoms)

    def lookup(self, pred: str, args: tuple[int, ...]) -> Optional[int]:
        for a in self.atoms:
            if a.pred == pred and a.args == args:
                return a.witness
        return None


EMPTY_STATE = KnowledgeStateLike()


def state_const(state: KnowledgeStateLike) -> Term:
    return StateConst(state)


# ---------------------------------------------------------------------------
# Signatures: functional constant rule sets
# ---------------------------------------------------------------------------

Rule = Callable[..., object]  # receives python-level values, returns one


@dataclass
class ConstInfo:
    name: str
    type: Type
    arity: int
    rule: Optional[Rule]  # None for oracle constants (no reduction rules)


class Signature:
    """Registry of typed constants and their functional reduction rules.

    A rule is a total function from tuples of closed normal arguments
    (handed over as python values: int, bool, KnowledgeStateLike) to a
    closed normal result value.  Constants without a rule never reduce.
    """

    def __init__(self, inherit_builtins: bool = True):
        self.consts: dict[str, ConstInfo] = {}
        if inherit_builtins:
            register_builtins(self)

    def register(self, name: str, type_: Type, rule: Optional[Rule] = None) -> Const:
        ats, res = uncurry_type(type_)
        if rule is not None and not all(atomic(a) for a in ats):
            raise ValueError(f"functional rule for {name} needs atomic argument types")
        self.consts[name] = ConstInfo(name, type_, len(ats), rule)
        return Const(name)

    def lookup(self, name: str) -> ConstInfo:
        try:
            return self.consts[name]
        except KeyError:
            raise UnknownConstant(name) from None

    def has(self, name: str) -> bool:
        return name in self.consts

    def copy(self) -> "Signature":
        sig = Signature(inherit_builtins=False)
        sig.consts = dict(self.consts)
        return sig


def uncurry_type(t: Type) -> tuple[list[Type], Type]:
    args: list[Type] = []
    while isinstance(t, Arrow):
        args.append(t.dom)
        t = t.cod
    return args, t


def register_builtins(sig: Signature) -> None:
    """Arithmetic and boolean helper constants, all T-definable."""
    sig.register("lt", arrows(NAT, NAT, BOOL), lambda a, b: a < b)
    sig.register("le", arrows(NAT, NAT, BOOL), lambda a, b: a <= b)
    sig.register("eq", arrows(NAT, NAT, BOOL), lambda a, b: a == b)
    sig.register("add", arrows(NAT, NAT, NAT), lambda a, b: a + b)
    sig.register("sub", arrows(NAT, NAT, NAT), lambda a, b: max(a - b, 0))
    sig.register("mul", arrows(NAT, NAT, NAT), lambda a, b: a * b)
    sig.register("max", arrows(NAT, NAT, NAT), lambda a, b: max(a, b))
    sig.register("impb", arrows(BOOL, BOOL, BOOL), lambda a, b: (not a) or b)
    sig.register("notb", arrows(BOOL, BOOL), lambda a: not a)
    sig.register("andb", arrows(BOOL, BOOL, BOOL), lambda a, b: a and b)
    sig.register("orb", arrows(BOOL, BOOL, BOOL), lambda a, b: a or b)


BASE_SIGNATURE = Signature()


# ---------------------------------------------------------------------------
# Free variables and substitution
# ---------------------------------------------------------------------------

def free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name, _):
            return frozenset((name,))
        case Succ(a) | Proj(_, a):
            return free_vars(a)
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Pair(l, r):
            return free_vars(l) | free_vars(r)
        case Lam(x, _, body):
            return free_vars(body) - {x}
        case SeqLit(_, items):
            out: frozenset[str] = frozenset()
            for it in items:
                out |= free_vars(it)
            return out
        case _:
            return frozenset()


_fresh_counter = itertools.count()


def fresh_name(base: str, avoid: frozenset[str]) -> str:
    if base not in avoid:
        return base
    stem = base.split("#")[0]
    while True:
        cand = f"{stem}#{next(_fresh_counter)}"
        if cand not in avoid:
            return cand


def substitute(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding substitution t[s/x]."""
    match t:
        case Var(name, _):
            return s if name == x else t
        case Succ(a):
            return Succ(substitute(a, x, s))
        case Proj(i, a):
            return Proj(i, substitute(a, x, s))
        case App(f, a):
            return App(substitute(f, x, s), substitute(a, x, s))
        case Pair(l, r):
            return Pair(substitute(l, x, s), substitute(r, x, s))
        case SeqLit(elem, items):
            return SeqLit(elem, tuple(substitute(it, x, s) for it in items))
        case Lam(y, ty, body):
            if y == x or x not in free_vars(body):
                return t
            if y in free_vars(s):
                y2 = fresh_name(y, free_vars(s) | free_vars(body) | {x})
                body = substitute(body, y, Var(y2, ty))
                return Lam(y2, ty, substitute(body, x, s))
            return Lam(y, ty, substitute(body, x, s))
        case _:
            return t


def alpha_equal(t1: Term, t2: Term) -> bool:
    """Structural equality after canonical renaming of bound variables."""
    return _canon(t1, {}, itertools.count()) == _canon(t2, {}, itertools.count())


def _canon(t: Term, ren: dict[str, str], ctr: "itertools.count") -> object:
    match t:
        case Var(name, ty):
            return ("var", ren.get(name, name), ty)
        case Succ(a):
            return ("succ", _canon(a, ren, ctr))
        case Proj(i, a):
            return ("proj", i, _canon(a, ren, ctr))
        case App(f, a):
            return ("app", _canon(f, ren, ctr), _canon(a, ren, ctr))
        case Pair(l, r):
            return ("pair", _canon(l, ren, ctr), _canon(r, ren, ctr))
        case SeqLit(elem, items):
            return ("seq", elem, tuple(_canon(i, ren, ctr) for i in items))
        case Lam(x, ty, body):
            nx = f"@{next(ctr)}"
            ren2 = dict(ren)
            ren2[x] = nx
            return ("lam", nx, ty, _canon(body, ren2, ctr))
        case _:
            return t


# ---------------------------------------------------------------------------
# Type checking
# ---------------------------------------------------------------------------

def typecheck(t: Term, ctx: Optional[dict[str, Type]] = None,
              sig: Signature = BASE_SIGNATURE) -> Type:
    """The unique type of ``t`` in context ``ctx``; raises on failure."""
    ctx = ctx or {}
    match t:
        case Var(name, ty):
            if name not in ctx:
                raise UnboundVariable(name)
            if ctx[name] != ty:
                raise TypeMismatch(f"variable {name}: annotated {ty!r}, context {ctx[name]!r}")
            return ty
        case ZeroC():
            return NAT
        case TrueC() | FalseC():
            return BOOL
        case Succ(a):
            if typecheck(a, ctx, sig) != NAT:
                raise TypeMismatch("succ needs Nat")
            return NAT
        case If(ty):
            return arrows(BOOL, ty, ty, ty)
        case Rec(ty):
            return arrows(ty, arrows(NAT, ty, ty), NAT, ty)
        case App(f, a):
            ft = typecheck(f, ctx, sig)
            if not isinstance(ft, Arrow):
                raise TypeMismatch(f"cannot apply non-function of type {ft!r}")
            at = typecheck(a, ctx, sig)
            if ft.dom != at:
                raise TypeMismatch(f"argument type {at!r} does not match {ft.dom!r}")
            return ft.cod
        case Lam(x, ty, body):
            inner = dict(ctx)
            inner[x] = ty
            return Arrow(ty, typecheck(body, inner, sig))
        case Pair(l, r):
            return Product(typecheck(l, ctx, sig), typecheck(r, ctx, sig))
        case Proj(i, a):
            at = typecheck(a, ctx, sig)
            if not isinstance(at, Product):
                raise TypeMismatch(f"projection needs a product, got {at!r}")
            return at.left if i == 0 else at.right
        case Const(name):
            return sig.lookup(name).type
        case StateConst(_):
            return STATE
        case SeqLit(elem, items):
            for it in items:
                if typecheck(it, ctx, sig) != elem:
                    raise TypeMismatch("sequence element type mismatch")
            return SeqOf(elem)
        case BR(tau, sigma):
            return arrows(Arrow(Arrow(NAT, sigma), NAT),
                          Arrow(SeqOf(sigma), tau),
                          arrows(SeqOf(sigma), Arrow(sigma, tau), tau),
                          SeqOf(sigma), tau)
        case BRGuard(tau, sigma):
            return arrows(Arrow(Arrow(NAT, sigma), NAT),
                          Arrow(SeqOf(sigma), tau),
                          arrows(SeqOf(sigma), Arrow(sigma, tau), tau),
                          SeqOf(sigma), BOOL, tau)
        case Y(ty):
            return Arrow(Arrow(ty, ty), ty)
    raise KernelError(f"unhandled term {t!r}")


# ---------------------------------------------------------------------------
# Values <-> closed normal terms (for signature rules)
# ---------------------------------------------------------------------------

def term_to_value(t: Term) -> object:
    n = numeral_value(t)
    if n is not None:
        return n
    match t:
        case TrueC():
            return True
        case FalseC():
            return False
        case StateConst(s):
            return s
        case SeqLit(_, items):
            return tuple(term_to_value(i) for i in items)
    raise MalformedApplication(f"not a closed normal atomic value: {t!r}")


def value_to_term(v: object) -> Term:
    if isinstance(v, Term):
        return v
    if isinstance(v, bool):
        return boolean(v)
    if isinstance(v, int):
        return numeral(v)
    if isinstance(v, KnowledgeStateLike):
        return StateConst(v)
    raise KernelError(f"cannot embed value {v!r} as a term")


# ---------------------------------------------------------------------------
# One step reduction (reference semantics)
# ---------------------------------------------------------------------------

def spine(t: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def apply_spine(head: Term, args: list[Term]) -> Term:
    out = head
    for a in args:
        out = App(out, a)
    return out


def is_normal_value(t: Term) -> bool:
    """Closed-normal check for atomic-type values used by rule firing."""
    if numeral_value(t) is not None:
        return True
    return isinstance(t, (TrueC, FalseC, StateConst)) or (
        isinstance(t, SeqLit) and all(is_normal_value(i) or _is_normal(i) for i in t.items))


def _is_normal(t: Term, sig: Signature = BASE_SIGNATURE) -> bool:
    return contract_root(t, sig) is None and all(
        _is_normal(c, sig) for c in _children(t))


def _children(t: Term) -> list[Term]:
    match t:
        case Succ(a) | Proj(_, a):
            return [a]
        case App(f, a):
            return [f, a]
        case Pair(l, r):
            return [l, r]
        case Lam(_, _, body):
            return [body]
        case SeqLit(_, items):
            return list(items)
        case _:
            return []


def _rebuild(t: Term, kids: list[Term]) -> Term:
    match t:
        case Succ(_):
            return Succ(kids[0])
        case Proj(i, _):
            return Proj(i, kids[0])
        case App(_, _):
            return App(kids[0], kids[1])
        case Pair(_, _):
            return Pair(kids[0], kids[1])
        case Lam(x, ty, _):
            return Lam(x, ty, kids[0])
        case SeqLit(elem, _):
            return SeqLit(elem, tuple(kids))
        case _:
            return t


def seq_hat(s: SeqLit) -> Term:
    """The function extending a sequence literal by the dummy 0^sigma."""
    from .dummy import dummy  # local import: avoids a cycle at module load
    x = Var("n", NAT)
    body: Term = dummy(s.elem)
    for i in reversed(range(len(s.items))):
        body = If(s.elem)(Const("eq")(x, numeral(i)), s.items[i], body)
    return Lam("n", NAT, body)


def contract_root(t: Term, sig: Signature = BASE_SIGNATURE) -> Optional[Term]:
    """The contractum of the root redex if the root is a redex, else None."""
    match t:
        case App(Lam(x, _, body), a):
            return substitute(body, x, a)
        case Proj(i, Pair(l, r)):
            return l if i == 0 else r
    head, args = spine(t)
    match head:
        case If(_) if len(args) >= 3 and isinstance(args[0], (TrueC, FalseC)):
            chosen = args[1] if isinstance(args[0], TrueC) else args[2]
            return apply_spine(chosen, args[3:])
        case Rec(_) if len(args) >= 3:
            u, v, n = args[0], args[1], args[2]
            if isinstance(n, ZeroC):
                return apply_spine(u, args[3:])
            if isinstance(n, Succ):
                return apply_spine(App(App(v, n.arg), apply_spine(Rec(head.type), [u, v, n.arg])), args[3:])
        case Const(name) if sig.has(name):
            info = sig.lookup(name)
            if info.rule is not None and len(args) >= info.arity:
                call, rest = args[:info.arity], args[info.arity:]
                if all(is_normal_value(a) for a in call):
                    result = value_to_term(info.rule(*[term_to_value(a) for a in call]))
                    return apply_spine(result, rest)
        case BR(tau, sigma) if len(args) >= 4 and isinstance(args[3], SeqLit):
            yf, g, h, s = args[0], args[1], args[2], args[3]
            guard = Const("lt")(App(yf, seq_hat(s)), numeral(len(s.items)))
            return apply_spine(BRGuard(tau, sigma)(yf, g, h, s, guard), args[4:])
        case BRGuard(tau, sigma) if len(args) >= 5 and isinstance(args[4], (TrueC, FalseC)):
            yf, g, h, s = args[0], args[1], args[2], args[3]
            if isinstance(args[4], TrueC):
                return apply_spine(App(g, s), args[5:])
            assert isinstance(s, SeqLit)
            x = fresh_name("x", free_vars(t))
            ext = SeqLit(s.elem, s.items + (Var(x, s.elem),))
            return apply_spine(h(s, Lam(x, s.elem, BR(tau, sigma)(yf, g, h, ext))), args[5:])
        case Y(ty) if len(args) >= 1:
            return apply_spine(App(args[0], App(Y(ty), args[0])), args[1:])
    return None


def _find_redex_path(t: Term, sig: Signature, leftmost: bool) -> Optional[list[int]]:
    """Path (child indices) to the chosen redex, or None when normal.

    ``leftmost``: leftmost-outermost order (root first, then children left
    to right).  Otherwise rightmost-innermost.
    """
    if leftmost:
        if contract_root(t, sig) is not None:
            return []
        for i, c in enumerate(_children(t)):
            sub = _find_redex_path(c, sig, leftmost)
            if sub is not None:
                return [i] + sub
        return None
    kids = _children(t)
    for i in reversed(range(len(kids))):
        sub = _find_redex_path(kids[i], sig, leftmost)
        if sub is not None:
            return [i] + sub
    if contract_root(t, sig) is not None:
        return []
    return None


def _contract_at(t: Term, path: list[int], sig: Signature) -> Term:
    if not path:
        out = contract_root(t, sig)
        assert out is not None
        return out
    kids = _children(t)
    kids[path[0]] = _contract_at(kids[path[0]], path[1:], sig)
    return _rebuild(t, kids)


def step(t: Term, sig: Signature = BASE_SIGNATURE, strategy: str = "leftmost-outermost") -> Optional[Term]:
    """One reduction step under the fixed strategy, or None when normal."""
    leftmost = strategy == "leftmost-outermost"
    path = _find_redex_path(t, sig, leftmost)
    if path is None:
        return None
    return _contract_at(t, path, sig)


def normalize(t: Term, fuel: int = DEFAULT_FUEL, sig: Signature = BASE_SIGNATURE,
              strategy: str = "leftmost-outermost") -> Term:
    """Iterated :func:`step` to normal form; FuelExhausted past the budget."""
    for _ in range(fuel):
        nxt = step(t, sig, strategy)
        if nxt is None:
            return t
        t = nxt
    raise FuelExhausted(f"no normal form within {fuel} steps")


def equal_closed_atomic(t1: Term, t2: Term, sig: Signature = BASE_SIGNATURE,
                        fuel: int = DEFAULT_FUEL) -> bool:
    """Equality of closed atomic-typed terms by normal form comparison."""
    return normalize(t1, fuel, sig) == normalize(t2, fuel, sig)


# ---------------------------------------------------------------------------
# Fast evaluation (environment machine)
# ---------------------------------------------------------------------------

class _Closure:
    __slots__ = ("var", "body", "env")

    def __init__(self, var: str, body: Term, env: dict):
        self.var = var
        self.body = body
        self.env = env


class _ConstApp:
    """Partially applied constant (including if/rec/br/y heads)."""

    __slots__ = ("head", "args")

    def __init__(self, head: object, args: tuple):
        self.head = head
        self.args = args


class _Budget:
    __slots__ = ("left",)

    def __init__(self, fuel: int):
        self.left = fuel

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise FuelExhausted("evaluation budget exceeded")


Value = Union[int, bool, KnowledgeStateLike, tuple, _Closure, _ConstApp]


def evaluate(t: Term, sig: Signature = BASE_SIGNATURE, fuel: int = DEFAULT_FUEL) -> Value:
    """Evaluate a closed term to a value.

    Agrees with :func:`normalize` on closed terms of atomic type (the
    calculus is strongly normalizing with unique atomic normal forms), but
    runs orders of magnitude faster.  Conditionals and recursor unfoldings
    are lazy in the untaken branch, so PCF-style terms whose recursion is
    well founded also evaluate.
    """
    return _eval(t, {}, sig, _Budget(fuel))


def eval_nat(t: Term, sig: Signature = BASE_SIGNATURE, fuel: int = DEFAULT_FUEL) -> int:
    v = _eval(t, {}, sig, _Budget(fuel))
    if not isinstance(v, int) or isinstance(v, bool):
        raise TypeMismatch(f"expected a numeral, got {v!r}")
    return v


def eval_bool(t: Term, sig: Signature = BASE_SIGNATURE, fuel: int = DEFAULT_FUEL) -> bool:
    v = _eval(t, {}, sig, _Budget(fuel))
    if not isinstance(v, bool):
        raise TypeMismatch(f"expected a boolean, got {v!r}")
    return v


def eval_state(t: Term, sig: Signature = BASE_SIGNATURE, fuel: int = DEFAULT_FUEL) -> KnowledgeStateLike:
    v = _eval(t, {}, sig, _Budget(fuel))
    if not isinstance(v, KnowledgeStateLike):
        raise TypeMismatch(f"expected a state, got {v!r}")
    return v


def _eval(t: Term, env: dict, sig: Signature, budget: _Budget) -> Value:
    budget.spend()
    match t:
        case Var(name, _):
            try:
                return env[name]
            except KeyError:
                raise UnboundVariable(name) from None
        case ZeroC():
            return 0
        case Succ(a):
            v = _eval(a, env, sig, budget)
            assert isinstance(v, int)
            return v + 1
        case TrueC():
            return True
        case FalseC():
            return False
        case StateConst(s):
            return s
        case Lam(x, _, body):
            return _Closure(x, body, env)
        case Pair(l, r):
            return (_eval(l, env, sig, budget), _eval(r, env, sig, budget))
        case Proj(i, a):
            v = _eval(a, env, sig, budget)
            assert isinstance(v, tuple)
            return v[i]
        case SeqLit(elem, items):
            return _ConstApp(("seq", elem), tuple(_eval(i, env, sig, budget) for i in items))
        case App(_, _):
            head, args = spine(t)
            if isinstance(head, If):
                return _eval_if(head, args, env, sig, budget)
            if isinstance(head, Rec):
                return _eval_rec(head, args, env, sig, budget)
            fv = _eval(head, env, sig, budget)
            for a in args:
                fv = _apply(fv, _eval(a, env, sig, budget), sig, budget)
            return fv
        case Const(name):
            info = sig.lookup(name)
            if info.arity == 0:
                if info.rule is None:
                    raise MalformedApplication(f"oracle constant {name} has no value")
                return info.rule()
            return _ConstApp(("const", name), ())
        case If(ty):
            return _ConstApp(("if", ty), ())
        case Rec(ty):
            return _ConstApp(("rec", ty), ())
        case BR(tau, sigma):
            return _ConstApp(("br", tau, sigma), ())
        case BRGuard(tau, sigma):
            return _ConstApp(("brguard", tau, sigma), ())
        case Y(ty):
            return _ConstApp(("y", ty), ())
    raise KernelError(f"cannot evaluate {t!r}")


def _eval_if(head: If, args: list[Term], env: dict, sig: Signature, budget: _Budget) -> Value:
    if len(args) < 3:
        vals = tuple(_eval(a, env, sig, budget) for a in args)
        return _ConstApp(("if", head.type), vals)
    cond = _eval(args[0], env, sig, budget)
    chosen = args[1] if cond else args[2]
    out = _eval(chosen, env, sig, budget)
    for a in args[3:]:
        out = _apply(out, _eval(a, env, sig, budget), sig, budget)
    return out


def _eval_rec(head: Rec, args: list[Term], env: dict, sig: Signature, budget: _Budget) -> Value:
    if len(args) < 3:
        vals = tuple(_eval(a, env, sig, budget) for a in args)
        return _ConstApp(("rec", head.type), vals)
    base = _eval(args[0], env, sig, budget)
    stepf = _eval(args[1], env, sig, budget)
    n = _eval(args[2], env, sig, budget)
    assert isinstance(n, int)
    out = base
    for i in range(n):
        budget.spend()
        out = _apply(_apply(stepf, i, sig, budget), out, sig, budget)
    for a in args[3:]:
        out = _apply(out, _eval(a, env, sig, budget), sig, budget)
    return out


def _apply(f: Value, a: Value, sig: Signature, budget: _Budget) -> Value:
    budget.spend()
    if isinstance(f, _HatFun):
        assert isinstance(a, int)
        return f.items[a] if a < len(f.items) else f.default
    if isinstance(f, _BRCont):
        tau, sigma, yf, g, h, s = f.params
        ext = _ConstApp(s.head, _seq_items(s) + (a,))
        return _br_eval(tau, sigma, (yf, g, h, ext), sig, budget)
    if isinstance(f, _Closure):
        env2 = dict(f.env)
        env2[f.var] = a
        return _eval(f.body, env2, sig, budget)
    if isinstance(f, _ConstApp):
        kind = f.head[0]
        args = f.args + (a,)
        if kind == "const":
            info = sig.lookup(f.head[1])
            if len(args) == info.arity:
                if info.rule is None:
                    raise MalformedApplication(
                        f"oracle constant {f.head[1]} has no reduction rule")
                return info.rule(*args)
            return _ConstApp(f.head, args)
        if kind == "if":
            if len(args) == 3:
                return args[1] if args[0] else args[2]
            return _ConstApp(f.head, args)
        if kind == "rec":
            if len(args) == 3:
                base, stepf, n = args
                assert isinstance(n, int)
                out = base
                for i in range(n):
                    budget.spend()
                    out = _apply(_apply(stepf, i, sig, budget), out, sig, budget)
                return out
            return _ConstApp(f.head, args)
        if kind == "y":
            # Y u = u (Y u); the inner fixpoint is re-entered lazily.
            (u,) = args
            return _apply(u, _ConstApp(("y-rec",), (u,)), sig, budget)
        if kind == "y-rec":
            (u,) = f.args
            return _apply(_apply(u, f, sig, budget), a, sig, budget)
        if kind == "br":
            if len(args) == 4:
                return _br_eval(f.head[1], f.head[2], args, sig, budget)
            return _ConstApp(f.head, args)
        if kind == "brguard":
            if len(args) == 5:
                yf, g, h, s, guard = args
                if guard:
                    return _apply(g, s, sig, budget)
                return _br_else(f.head[1], f.head[2], yf, g, h, s, sig, budget)
            return _ConstApp(f.head, args)
        if kind == "seq":
            raise MalformedApplication("sequence literals are not functions")
    raise MalformedApplication(f"cannot apply value {f!r}")


def _seq_items(v: Value) -> tuple:
    assert isinstance(v, _ConstApp) and v.head[0] == "seq"
    return v.args


def _br_eval(tau: Type, sigma: Type, args: tuple, sig: Signature, budget: _Budget) -> Value:
    from .dummy import dummy
    yf, g, h, s = args
    items = _seq_items(s)
    default = _eval(dummy(sigma), {}, sig, budget)
    hat = _HatFun(items, default)
    bound = _apply(yf, hat, sig, budget)
    assert isinstance(bound, int)
    if bound < len(items):
        return _apply(g, s, sig, budget)
    return _br_else(tau, sigma, yf, g, h, s, sig, budget)


def _br_else(tau: Type, sigma: Type, yf: Value, g: Value, h: Value, s: Value,
             sig: Signature, budget: _Budget) -> Value:
    cont = _BRCont(tau, sigma, yf, g, h, s)
    return _apply(_apply(h, s, sig, budget), cont, sig, budget)


class _HatFun:
    """Value-level \\hat{s}: total extension of a finite sequence by 0."""

    __slots__ = ("items", "default")

    def __init__(self, items: tuple, default: Value):
        self.items = items
        self.default = default


class _BRCont:
    """Value-level continuation lambda x. BR Y G H (s*x)."""

    __slots__ = ("params",)

    def __init__(self, tau, sigma, yf, g, h, s):
        self.params = (tau, sigma, yf, g, h, s)


def value_to_normal_term(v: Value) -> Term:
    """Readback for first order values (atomic, pairs, sequences)."""
    if isinstance(v, bool):
        return boolean(v)
    if isinstance(v, int):
        return numeral(v)
    if isinstance(v, KnowledgeStateLike):
        return StateConst(v)
    if isinstance(v, tuple):
        return Pair(value_to_normal_term(v[0]), value_to_normal_term(v[1]))
    if isinstance(v, _ConstApp) and v.head[0] == "seq":
        return SeqLit(v.head[1], tuple(value_to_normal_term(i) for i in v.args))
    raise KernelError(f"no term readback for {v!r}")

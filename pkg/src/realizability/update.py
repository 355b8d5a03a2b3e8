"""Finite and transfinite update procedures and their zero finders.

An update procedure watches an ordinal-indexed family of functions and
either accepts it (empty answer) or demands one correction ``(level, n,
m)`` whose justification only depends on the strictly lower levels.
Learning processes apply corrections with the house-of-cards collapse
(everything above the corrected level is erased); bar-recursive zero
finders instead grow a finite approximation level by level, calling
themselves at the next-lower ordinal power for each element.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .games import decode_nat_list, encode_nat_list
from .kernel import (
    App, Const, FuelExhausted, KernelError, NAT, Term, arrows, evaluate,
    numeral, value_to_normal_term,
)
from .sexpr import SExpr, SyntaxError_, parse_all, parse_one, unparse
from .states import LearningSignature


OrdCode = tuple  # lexicographically ordered tuples, one shape per space


class OrdSpace:
    """An ordinal shape for update-procedure levels."""

    name: str

    def is_code(self, code: OrdCode) -> bool:
        raise NotImplementedError

    def sample_codes(self, rng: random.Random, count: int) -> list[OrdCode]:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteOrd(OrdSpace):
    """Ordinal k: levels 0 .. k-1, codes (i,)."""

    k: int

    @property
    def name(self) -> str:
        return str(self.k)

    def is_code(self, code: OrdCode) -> bool:
        return len(code) == 1 and 0 <= code[0] < self.k

    def sample_codes(self, rng, count):
        return [(rng.randrange(self.k),) for _ in range(count)]


@dataclass(frozen=True)
class OmegaPow(OrdSpace):
    """Ordinal omega^k: codes are k-tuples in lexicographic order."""

    k: int

    @property
    def name(self) -> str:
        return "omega" if self.k == 1 else f"omega^{self.k}"

    def is_code(self, code: OrdCode) -> bool:
        return len(code) == self.k and all(isinstance(c, int) and c >= 0 for c in code)

    def sample_codes(self, rng, count):
        return [tuple(rng.randrange(4) for _ in range(self.k)) for _ in range(count)]


@dataclass(frozen=True)
class OmegaTimes2(OrdSpace):
    """Ordinal omega*2: codes (j, n) with j in {0, 1}."""

    @property
    def name(self) -> str:
        return "omega*2"

    def is_code(self, code: OrdCode) -> bool:
        return len(code) == 2 and code[0] in (0, 1) and code[1] >= 0

    def sample_codes(self, rng, count):
        return [(rng.randrange(2), rng.randrange(4)) for _ in range(count)]


Update = Optional[tuple[OrdCode, int, int]]  # None is the empty answer


@dataclass(frozen=True)
class Family:
    """Sparse ordinal-indexed family of functions, default value 0."""

    space: OrdSpace
    values: frozenset = frozenset()  # of ((code, n), m) with m != 0

    def _table(self) -> dict:
        return dict(self.values)

    def get(self, code: OrdCode, n: int) -> int:
        return self._table().get((code, n), 0)

    def fn(self, code: OrdCode) -> Callable[[int], int]:
        table = self._table()
        return lambda n: table.get((code, n), 0)

    def with_value(self, code: OrdCode, n: int, m: int) -> "Family":
        table = self._table()
        table.pop((code, n), None)
        if m != 0:
            table[(code, n)] = m
        return Family(self.space, frozenset(table.items()))

    def support(self) -> list[tuple[OrdCode, int, int]]:
        return sorted((c, n, m) for (c, n), m in self.values)

    def __bool__(self) -> bool:
        return bool(self.values)


def zero_family(space: OrdSpace) -> Family:
    return Family(space)


@dataclass
class UpdateProcedure:
    """A continuous corrector for ordinal-indexed function families."""

    space: OrdSpace
    eval: Callable[[Family], Update]
    name: str = "anonymous"

    def __call__(self, f: Family) -> Update:
        out = self.eval(f)
        if out is not None:
            code, n, m = out
            if not self.space.is_code(code):
                raise KernelError(f"{self.name}: update at a code outside {self.space.name}")
        return out


# ---------------------------------------------------------------------------
# Update operators
# ---------------------------------------------------------------------------

def oplus_flat(f: Callable[[int], int],
               update: Optional[tuple[int, int]]) -> Callable[[int], int]:
    """Pointwise overwrite of a single function (level-1 updates)."""
    if update is None:
        return f
    n, m = update
    return lambda x: m if x == n else f(x)


def family_oplus_flat(f: Family, update: Update) -> Family:
    if update is None:
        return f
    code, n, m = update
    return f.with_value(code, n, m)


def oplus_transfinite(f: Family, update: Update) -> Family:
    """Controlled update: overwrite at the level, keep everything below,
    erase everything above (the house of cards collapses)."""
    if update is None:
        return f
    code, n, m = update
    kept = {(c, x): v for (c, x), v in f.values
            if c < code or (c == code and x != n)}
    if m != 0:
        kept[(code, n)] = m
    return Family(f.space, frozenset(kept.items()))


@dataclass
class LearningRun:
    zero: Family
    trace: list[Update]
    families: list[Family]

    @property
    def steps(self) -> int:
        return len(self.trace)


def learning_process(proc: UpdateProcedure, mode: str = "transfinite",
                     max_steps: int = 10_000) -> LearningRun:
    """Iterate controlled updates from the all-zero family until the
    procedure emits the empty answer."""
    apply = oplus_transfinite if mode == "transfinite" else family_oplus_flat
    f = zero_family(proc.space)
    trace: list[Update] = []
    families = [f]
    for _ in range(max_steps):
        upd = proc(f)
        if upd is None:
            return LearningRun(f, trace, families)
        trace.append(upd)
        f = apply(f, upd)
        families.append(f)
    raise FuelExhausted(f"learning process exceeded {max_steps} steps")


# ---------------------------------------------------------------------------
# Condition-(2) validation
# ---------------------------------------------------------------------------

def random_family(space: OrdSpace, rng: random.Random, size: int = 5) -> Family:
    f = zero_family(space)
    for code in space.sample_codes(rng, size):
        f = f.with_value(code, rng.randrange(5), rng.randrange(5))
    return f


def validate_update_procedure(proc: UpdateProcedure, probes: int = 500,
                              seed: int = 0) -> int:
    """Randomized probe of the no-recontradiction condition: when g agrees
    with f below the update's level and already holds the demanded value,
    the procedure may not re-demand the same slot.  Returns the number of
    violations found (0 expected)."""
    rng = random.Random(seed)
    violations = 0
    for _ in range(probes):
        f = random_family(proc.space, rng)
        upd = proc(f)
        if upd is None:
            continue
        code, n, m = upd
        g = zero_family(proc.space)
        for (c, x), v in f.values:
            if c < code:
                g = g.with_value(c, x, v)
        g = g.with_value(code, n, m)
        for extra in proc.space.sample_codes(rng, 3):
            if extra >= code:
                g = g.with_value(extra, rng.randrange(5), rng.randrange(5))
        g = g.with_value(code, n, m)  # keep the demanded value in place
        upd2 = proc(g)
        if upd2 is not None and upd2[0] == code and upd2[1] == n:
            violations += 1
    return violations


# ---------------------------------------------------------------------------
# Bar-recursive zero finders
# ---------------------------------------------------------------------------

@dataclass
class _Budget:
    left: int

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted("bar recursion budget exceeded")


FamFn = Callable[[OrdCode, int], int]


@dataclass(frozen=True)
class Nested:
    """Nested family with explicit finite support (codes relative to the
    current nesting depth)."""

    fn: FamFn
    support: frozenset  # of (code, n)


ZERO_NESTED = Nested(lambda _c, _n: 0, frozenset())


def _hat_numbers(s: list[int]) -> Nested:
    values = tuple(s)
    return Nested(lambda _c, n: values[n] if n < len(values) else 0,
                  frozenset(((), i) for i in range(len(values))))


def _hat(s: list[Nested]) -> Nested:
    row = tuple(s)

    def fn(code: OrdCode, n: int) -> int:
        i = code[0]
        return row[i].fn(code[1:], n) if i < len(row) else 0

    support = frozenset(((i,) + c, n)
                        for i, el in enumerate(row) for (c, n) in el.support)
    return Nested(fn, support)


def _nested_to_family(space: OrdSpace, nested: Nested,
                      lift: Callable[[OrdCode], OrdCode] = lambda c: c) -> Family:
    values = {}
    for code, n in nested.support:
        v = nested.fn(code, n)
        if v != 0:
            values[(lift(code), n)] = v
    return Family(space, frozenset(values.items()))


def zero_br(proc: UpdateProcedure, fuel: int = 200_000) -> Family:
    """Zero finding by bar recursion for ordinals 1, omega and omega^k.

    Host recursion mirroring the defining equations: sequences grow while
    the procedure demands values at fresh positions, and each element of
    the higher-ordinal sequence is produced by a nested zero finder one
    power below.  Exponential in the nesting depth; desk scale only.
    """
    budget = _Budget(fuel)
    if isinstance(proc.space, FiniteOrd) and proc.space.k == 1:
        def u_eval(nested: Nested) -> Optional[tuple[int, int]]:
            upd = proc(_nested_to_family(proc.space, nested, lambda _c: (0,)))
            return None if upd is None else (upd[1], upd[2])

        values = _zero_br_numbers(u_eval, budget)
        out = _nested_to_family(proc.space, _hat_numbers(values), lambda _c: (0,))
    elif isinstance(proc.space, OmegaPow):
        nested = _zero_br_level(
            lambda nd: proc(_nested_to_family(proc.space, nd)),
            proc.space.k, budget)
        out = _nested_to_family(proc.space, nested)
    else:
        raise KernelError(f"no bar-recursive zero finder at {proc.space.name}")
    if proc(out) is not None:
        raise AssertionError("bar recursion returned a non-zero")
    return out


def _zero_br_numbers(u_eval: Callable[[Nested], Optional[tuple[int, int]]],
                     budget: _Budget) -> list[int]:
    """Ordinal 1: grow the function value by value; a demanded correction
    at the frontier position retries the extension with that value."""

    def br(s: list[int]) -> list[int]:
        budget.spend()
        upd = u_eval(_hat_numbers(s))
        if upd is None:
            return s
        n, _m = upd
        if n < len(s):
            return s
        t = br(s + [0])
        upd2 = u_eval(_hat_numbers(t))
        if upd2 is not None and upd2[0] == len(s):
            return br(s + [upd2[1]])
        return t

    return br([])


def _zero_br_level(u_eval: Callable[[Nested], Update], k: int,
                   budget: _Budget) -> Nested:
    """Ordinal omega^k via sequences of omega^(k-1) elements, each found
    by the zero finder one power below."""
    if k == 0:
        values = _zero_br_numbers(
            lambda nd: _drop_code(u_eval(nd)), budget)
        return _hat_numbers(values)

    def br(s: list[Nested]) -> list[Nested]:
        budget.spend()
        upd = u_eval(_hat(s))
        if upd is None or upd[0][0] < len(s):
            return s

        def projected(f_sub: Nested) -> Update:
            extended = br(s + [f_sub])
            inner = u_eval(_hat(extended))
            if inner is not None and inner[0][0] == len(s):
                return (inner[0][1:], inner[1], inner[2])
            return None

        g = _zero_br_level(projected, k - 1, budget)
        return br(s + [g])

    return _hat(br([]))


def _drop_code(upd: Update) -> Optional[tuple[int, int]]:
    if upd is None:
        return None
    return upd[1], upd[2]


def level_project(proc: UpdateProcedure, level: int) -> Callable:
    """The unary projection of a procedure at a fixed top-level index, as
    used by the nested zero finders."""

    def projected(f: Family) -> Update:
        upd = proc(f)
        if upd is not None and upd[0][0] == level:
            return (upd[0][1:], upd[1], upd[2])
        return None

    return projected


# ---------------------------------------------------------------------------
# Scripted procedures (demand tables) and kernel-term procedures
# ---------------------------------------------------------------------------

Expr = Union[int, tuple]


def eval_expr(e: Expr, f: Family) -> int:
    if isinstance(e, int):
        return e
    op = e[0]
    if op == "at":
        return f.get(e[1], e[2])
    if op == "+":
        return eval_expr(e[1], f) + eval_expr(e[2], f)
    if op == "*":
        return eval_expr(e[1], f) * eval_expr(e[2], f)
    raise KernelError(f"bad expression {e!r}")


def _expr_levels(e: Expr) -> list[OrdCode]:
    if isinstance(e, int):
        return []
    if e[0] == "at":
        return [e[1]]
    return _expr_levels(e[1]) + _expr_levels(e[2])


@dataclass
class Demand:
    code: OrdCode
    n: int
    expr: Expr


def scripted_procedure(space: OrdSpace, demands: Sequence[Demand],
                       name: str = "scripted") -> UpdateProcedure:
    """First-unsatisfied-demand procedure.  Demands are scanned in order;
    each expression may only read levels strictly below its own, which
    makes the no-recontradiction condition hold by construction."""
    seen = set()
    for d in demands:
        if not space.is_code(d.code):
            raise KernelError(f"demand at a code outside {space.name}")
        if (d.code, d.n) in seen:
            raise KernelError("duplicate demand slot")
        seen.add((d.code, d.n))
        for ref in _expr_levels(d.expr):
            if not ref < d.code:
                raise KernelError("demand expression reads a non-lower level")

    def run(f: Family) -> Update:
        for d in demands:
            want = eval_expr(d.expr, f)
            if f.get(d.code, d.n) != want:
                return (d.code, d.n, want)
        return None

    return UpdateProcedure(space, run, name)


UPDATE_CODE_CONST = "upd3"


def install_update_coding(sig: LearningSignature) -> None:
    """Kernel constants for the numeric coding of updates: ``upd3 i n m``
    is the code of a demanded correction, 0 the code of the empty answer."""
    if not sig.has(UPDATE_CODE_CONST):
        sig.register(UPDATE_CODE_CONST, arrows(NAT, NAT, NAT, NAT),
                     lambda i, n, m: encode_nat_list([i, n, m]) + 1)


def decode_update(code: int) -> Optional[tuple[int, int, int]]:
    if code == 0:
        return None
    parts = decode_nat_list(code - 1)
    if parts is None or len(parts) != 3:
        raise KernelError(f"bad update code {code}")
    return tuple(parts)


def kernel_update_procedure(term: Term, k: int, sig: LearningSignature,
                            name: str = "kernel") -> UpdateProcedure:
    """Wrap a typed update procedure: a term of type (Nat->Nat)^k -> Nat
    returning update codes.  The family is passed through fresh functional
    constants that read the current family."""
    install_update_coding(sig)
    space = FiniteOrd(k)
    uid = itertools.count()

    def run(f: Family) -> Update:
        fresh = next(uid)
        inner = sig.copy()
        applied = term
        for i in range(k):
            cname = f"fam{fresh}_{i}"
            fn = f.fn((i,))
            inner.register(cname, NAT >> NAT, fn)
            applied = App(applied, Const(cname))
        out = evaluate(applied, inner)
        assert isinstance(out, int)
        decoded = decode_update(out)
        if decoded is None:
            return None
        i, n, m = decoded
        if not 1 <= i <= k:
            raise KernelError(f"kernel procedure updated level {i} outside 1..{k}")
        return ((i - 1,), n, m)

    return UpdateProcedure(space, run, name)


# ---------------------------------------------------------------------------
# Procedure files
# ---------------------------------------------------------------------------

def _parse_ordinal(e: SExpr) -> OrdSpace:
    if e == 1 or e == "1":
        return FiniteOrd(1)
    if e == "omega":
        return OmegaPow(1)
    if e == "omega-2":
        return OmegaTimes2()
    if isinstance(e, list) and len(e) == 2:
        if e[0] == "fin":
            return FiniteOrd(int(e[1]))
        if e[0] == "omega-pow":
            return OmegaPow(int(e[1]))
    raise SyntaxError_(f"bad ordinal {unparse(e)}", 0)


def _parse_code(e: SExpr) -> OrdCode:
    if isinstance(e, list) and e and e[0] == "lvl":
        return tuple(int(x) for x in e[1:])
    raise SyntaxError_(f"bad level {unparse(e)}", 0)


def _parse_expr(e: SExpr) -> Expr:
    if isinstance(e, int):
        return e
    if isinstance(e, list) and e:
        if e[0] == "at" and len(e) == 3:
            return ("at", _parse_code(e[1]), int(e[2]))
        if e[0] in ("+", "*") and len(e) == 3:
            return (e[0], _parse_expr(e[1]), _parse_expr(e[2]))
    raise SyntaxError_(f"bad expression {unparse(e)}", 0)


def parse_procedure(src: str, name: str = "file") -> UpdateProcedure:
    """Procedure files: ``(proc (ordinal omega) (demand (lvl 0) 3 5) ...)``."""
    e = parse_one(src)
    if not (isinstance(e, list) and e and e[0] == "proc"):
        raise SyntaxError_("procedure files start with (proc ...)", 0)
    space: Optional[OrdSpace] = None
    demands: list[Demand] = []
    for item in e[1:]:
        if isinstance(item, list) and item and item[0] == "ordinal":
            space = _parse_ordinal(item[1])
        elif isinstance(item, list) and item and item[0] == "demand":
            demands.append(Demand(_parse_code(item[1]), int(item[2]),
                                  _parse_expr(item[3])))
        else:
            raise SyntaxError_(f"bad procedure clause {unparse(item)}", 0)
    if space is None:
        raise SyntaxError_("procedure file lacks an (ordinal ...) clause", 0)
    return scripted_procedure(space, demands, name)


def export_learning_trace(run: LearningRun) -> str:
    """Line records: step, update, collapsed-range summary."""
    lines = []
    for i, upd in enumerate(run.trace):
        before, after = run.families[i], run.families[i + 1]
        collapsed = len(before.values - after.values)
        code, n, m = upd
        lines.append(f"{i}\t({','.join(map(str, code))}) {n} -> {m}\tcollapsed {collapsed}")
    lines.append(f"{run.steps}\tzero\tsupport {len(run.zero.values)}")
    return "\n".join(lines) + "\n"

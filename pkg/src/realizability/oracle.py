"""Oracle-bearing terms, approximation at a state, and the zero loop.

A term may mention the non-computable constants registered by a
:class:`~realizability.states.LearningSignature` (``Chi_P``, ``Phi_P``,
``Add_P``, ...).  Its approximation at a state replaces every oracle by
its computable counterpart applied to that state.  Iterating
``s <- s cup nf(t[s])`` on a closed state-typed term drives all learning
in the workbench; the loop provably reaches a state where the term
evaluates to the empty state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .kernel import (
    App, Const, FuelExhausted, KnowledgeStateLike, Lam, Pair, Proj, SeqLit,
    StateConst, Succ, Term, eval_state, evaluate, value_to_normal_term,
    DEFAULT_FUEL,
)
from .states import EMPTY, KnowledgeState, LearningSignature, cup, leq_state
from .syntax import print_state, print_term


class NotStabilized(Exception):
    def __init__(self, horizon: int):
        super().__init__(f"no stabilization within horizon {horizon}")
        self.horizon = horizon


def map_consts(t: Term, f: Callable[[str], Optional[Term]]) -> Term:
    """Rewrite every Const node by ``f`` (None keeps the constant)."""
    match t:
        case Const(name):
            out = f(name)
            return t if out is None else out
        case App(g, a):
            return App(map_consts(g, f), map_consts(a, f))
        case Lam(x, ty, body):
            return Lam(x, ty, map_consts(body, f))
        case Pair(l, r):
            return Pair(map_consts(l, f), map_consts(r, f))
        case Proj(i, a):
            return Proj(i, map_consts(a, f))
        case Succ(a):
            return Succ(map_consts(a, f))
        case SeqLit(elem, items):
            return SeqLit(elem, tuple(map_consts(i, f) for i in items))
        case _:
            return t


def state_constants(t: Term) -> set[KnowledgeState]:
    out: set[KnowledgeState] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        match u:
            case StateConst(s):
                out.add(s)
            case App(f, a):
                stack += [f, a]
            case Lam(_, _, body):
                stack.append(body)
            case Pair(l, r):
                stack += [l, r]
            case Proj(_, a) | Succ(a):
                stack.append(a)
            case SeqLit(_, items):
                stack += list(items)
    return out


@dataclass(frozen=True)
class OracleTerm:
    """A kernel term over a learning signature, possibly with oracles."""

    term: Term
    sig: LearningSignature

    @property
    def state_empty(self) -> bool:
        """True when every state constant inside is the empty state."""
        return all(not s for s in state_constants(self.term))

    def oracle_names(self) -> set[str]:
        names: set[str] = set()
        stack = [self.term]
        while stack:
            u = stack.pop()
            if isinstance(u, Const) and u.name in self.sig.oracle_to_learn:
                names.add(u.name)
            match u:
                case App(f, a):
                    stack += [f, a]
                case Lam(_, _, body):
                    stack.append(body)
                case Pair(l, r):
                    stack += [l, r]
                case Proj(_, a) | Succ(a):
                    stack.append(a)
                case SeqLit(_, items):
                    stack += list(items)
        return names


def approximate(t: OracleTerm, s: KnowledgeState) -> Term:
    """The approximation t[s]: oracles replaced by state-s approximations."""
    sc = StateConst(s)

    def repl(name: str) -> Optional[Term]:
        learn = t.sig.oracle_to_learn.get(name)
        return None if learn is None else App(Const(learn), sc)

    return map_consts(t.term, repl)


def nf_state(t: OracleTerm, s: KnowledgeState, fuel: int = DEFAULT_FUEL) -> KnowledgeState:
    """Normal form of the state-typed approximation t[s]."""
    return eval_state(approximate(t, s), t.sig, fuel)


@dataclass
class ZeroResult:
    zero_state: KnowledgeState
    trace: list[KnowledgeState]          # s0, s1, ..., zero_state
    emitted: list[KnowledgeState]        # nf(t[s_i]) per step

    @property
    def steps(self) -> int:
        return len(self.emitted)


def zero_loop(t: OracleTerm, s0: KnowledgeState = EMPTY,
              fuel: int = DEFAULT_FUEL, max_steps: int = 100_000) -> ZeroResult:
    """Iterate ``s <- s cup nf(t[s])`` until the term emits the empty state.

    Requires ``t`` closed, of type State, with state empty.  The normal
    form computed for the termination check is reused as the step's
    emitted update.
    """
    s = s0
    trace = [s]
    emitted: list[KnowledgeState] = []
    for _ in range(max_steps):
        update = nf_state(t, s, fuel)
        if not update:
            return ZeroResult(s, trace, emitted)
        emitted.append(update)
        s = cup(s, update)
        trace.append(s)
    raise FuelExhausted(f"zero loop did not terminate within {max_steps} steps")


@dataclass
class WIChain:
    """Weakly increasing chain of states, probed lazily and memoized."""

    generator: Callable[[int], KnowledgeState]
    _memo: dict[int, KnowledgeState] = field(default_factory=dict)

    def __call__(self, i: int) -> KnowledgeState:
        if i not in self._memo:
            self._memo[i] = self.generator(i)
            if i - 1 in self._memo and not leq_state(self._memo[i - 1], self._memo[i]):
                raise ValueError(f"chain is not weakly increasing at index {i}")
        return self._memo[i]

    @staticmethod
    def constant(s: KnowledgeState) -> "WIChain":
        return WIChain(lambda _i: s)

    @staticmethod
    def from_trace(trace: list[KnowledgeState]) -> "WIChain":
        """Chain extending a finite trace by its last element."""
        last = trace[-1] if trace else EMPTY
        return WIChain(lambda i: trace[i] if i < len(trace) else last)


def stabilization_index(t: OracleTerm, chain: WIChain, horizon: int = 64,
                        fuel: int = DEFAULT_FUEL) -> int:
    """Least i <= horizon with nf(t[chain(j)]) = nf(t[chain(i)]) for all
    i <= j <= horizon.  An empirical probe, not a convergence decision."""
    values = [evaluate(approximate(t, chain(i)), t.sig, fuel) for i in range(horizon + 1)]
    i = horizon
    while i > 0 and values[i - 1] == values[i]:
        i -= 1
    if i == horizon and horizon > 0 and values[horizon - 1] != values[horizon]:
        raise NotStabilized(horizon)
    return i


def export_trace(result: ZeroResult) -> str:
    """Line-delimited records: step index, state literal, emitted update."""
    lines = []
    for i, s in enumerate(result.trace):
        update = result.emitted[i] if i < len(result.emitted) else EMPTY
        lines.append(f"{i}\t{print_state(s)}\t{print_state(update)}")
    return "\n".join(lines) + "\n"


def describe(t: OracleTerm) -> str:
    return print_term(t.term)

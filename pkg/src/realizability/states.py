"""Knowledge states, atoms, consistent union, and the learning rules.

A state is a finite consistent set of atoms ``(P, args, witness)``
recording verified witnesses for semidecidable questions.  For each
registered predicate ``P`` the signature carries

* oracle constants ``Chi_P``, ``Phi_P``, ``Add_P`` with no reduction
  rules, and
* their computable approximations ``chi_P``, ``phi_P``, ``add_P`` which
  take an explicit state argument and rewrite by a functional rule set,

together with the global left-biased merge constant ``cup``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .kernel import (
    BOOL, NAT, STATE, Atom, Const, KnowledgeStateLike, MalformedApplication,
    Signature, Term, arrows, eval_bool, is_normal_value, numeral, spine,
    term_to_value, value_to_term,
)

KnowledgeState = KnowledgeStateLike
EMPTY = KnowledgeState()


def state(*atoms: tuple[str, tuple[int, ...], int] | Atom) -> KnowledgeState:
    """Convenience constructor from (pred, args, witness) triples."""
    out = []
    for a in atoms:
        out.append(a if isinstance(a, Atom) else Atom(a[0], tuple(a[1]), a[2]))
    return KnowledgeState(tuple(out))


def consistent(a1: Atom, a2: Atom) -> bool:
    if a1.pred == a2.pred and a1.args == a2.args:
        return a1.witness == a2.witness
    return True


def cup(s1: KnowledgeState, s2: KnowledgeState) -> KnowledgeState:
    """Consistent union: keep s1, drop s2 atoms conflicting with s1."""
    kept = list(s1.atoms)
    for a in s2.atoms:
        if all(consistent(a, b) for b in s1.atoms):
            kept.append(a)
    return KnowledgeState(tuple(kept))


def cup_many(states: Iterable[KnowledgeState]) -> KnowledgeState:
    out = EMPTY
    for s in states:
        out = cup(out, s)
    return out


def leq_state(s1: KnowledgeState, s2: KnowledgeState) -> bool:
    """Inclusion of atom sets."""
    return set(s1.atoms) <= set(s2.atoms)


def states_consistent(s1: KnowledgeState, s2: KnowledgeState) -> bool:
    return all(consistent(a, b) for a in s1.atoms for b in s2.atoms)


def states_disjoint(s1: KnowledgeState, s2: KnowledgeState) -> bool:
    return not (set(s1.atoms) & set(s2.atoms))


@dataclass
class PredicateSig:
    """A (k+1)-ary decidable predicate: body of type Nat^{k+1} -> Bool.

    ``body`` is a closed kernel term; ``fn`` optionally overrides it with a
    host evaluator (used by the game completeness pipeline, whose play
    improvement predicate is defined relative to a host strategy).
    """

    name: str
    arity: int  # k: number of argument positions before the witness
    body: Optional[Term] = None
    fn: Optional[Callable[..., bool]] = None

    def __post_init__(self) -> None:
        if self.body is None and self.fn is None:
            raise ValueError("predicate needs a kernel body or a host evaluator")


class LearningSignature(Signature):
    """Signature with knowledge-state constants and predicate registration."""

    def __init__(self) -> None:
        super().__init__()
        self.predicates: dict[str, PredicateSig] = {}
        self.oracle_to_learn: dict[str, str] = {}
        self._pred_memo: dict[tuple[str, tuple[int, ...], int], bool] = {}
        self.learn_names: set[str] = set()
        self.register("cup", arrows(STATE, STATE, STATE), cup)
        self.learn_names.add("cup")

    # -- predicates ---------------------------------------------------------

    def register_predicate(self, pred: PredicateSig) -> None:
        if pred.name in self.predicates:
            raise ValueError(f"predicate {pred.name} already registered")
        self.predicates[pred.name] = pred
        k = pred.arity
        nat_k = [NAT] * k

        name = pred.name
        self.register(pred.name, arrows(*([NAT] * (k + 1)), BOOL),
                      lambda *a: self.holds(name, a[:-1], a[-1]))
        self.register(f"Chi_{pred.name}", arrows(*nat_k, BOOL))
        self.register(f"Phi_{pred.name}", arrows(*nat_k, NAT))
        self.register(f"Add_{pred.name}", arrows(*([NAT] * (k + 1)), STATE))

        def chi(s: KnowledgeState, *args: int) -> bool:
            return s.lookup(name, args) is not None

        def phi(s: KnowledgeState, *args: int) -> int:
            w = s.lookup(name, args)
            return 0 if w is None else w

        def add(s: KnowledgeState, *args_m: int) -> KnowledgeState:
            args, m = args_m[:-1], args_m[-1]
            if s.lookup(name, args) is not None or not self.holds(name, args, m):
                return EMPTY
            return KnowledgeState((Atom(name, args, m),))

        self.register(f"chi_{pred.name}", arrows(STATE, *nat_k, BOOL), chi)
        self.register(f"phi_{pred.name}", arrows(STATE, *nat_k, NAT), phi)
        self.register(f"add_{pred.name}", arrows(STATE, *([NAT] * (k + 1)), STATE), add)
        for op in ("Chi", "Phi", "Add"):
            self.oracle_to_learn[f"{op}_{pred.name}"] = f"{op.lower()}_{pred.name}"
        self.learn_names |= {f"chi_{pred.name}", f"phi_{pred.name}", f"add_{pred.name}"}

    def register_state_indexed(self, base: str, arg_types: list, result_type,
                               fn: Callable) -> tuple[Const, Const]:
        """An oracle constant ``base`` whose approximation at state s is the
        functional constant ``~base`` partially applied to s.

        ``fn(state, *args)`` must be total on closed normal arguments.  This
        generalizes the chi/phi/add pattern and backs the game pipeline's
        state-indexed strategy operators.
        """
        oracle = self.register(base, arrows(*arg_types, result_type))
        learn = self.register(f"~{base}", arrows(STATE, *arg_types, result_type), fn)
        self.oracle_to_learn[base] = f"~{base}"
        self.learn_names.add(f"~{base}")
        return oracle, learn

    def holds(self, pred: str, args: tuple[int, ...], witness: int) -> bool:
        """Truth of P(args, witness); memoized (hot path of zero loops)."""
        key = (pred, args, witness)
        hit = self._pred_memo.get(key)
        if hit is not None:
            return hit
        p = self.predicates[pred]
        if p.fn is not None:
            out = bool(p.fn(*args, witness))
        else:
            applied = p.body
            for a in (*args, witness):
                applied = applied(numeral(a))
            out = eval_bool(applied, self)
        self._pred_memo[key] = out
        return out

    def make_atom(self, pred: str, args: tuple[int, ...], witness: int) -> Atom:
        """Validating atom constructor: requires P(args, witness) = True."""
        if not self.holds(pred, tuple(args), witness):
            raise ValueError(f"atom rejected: {pred}{args} with witness {witness} is false")
        return Atom(pred, tuple(args), witness)


def learn_rule_step(applied: Term, sig: LearningSignature) -> Term:
    """One reduction step for a full application of chi/phi/add/cup.

    The argument must be one of the learning constants applied to closed
    normal arguments; anything else raises MalformedApplication.
    """
    head, args = spine(applied)
    if not isinstance(head, Const) or head.name not in sig.learn_names:
        raise MalformedApplication(f"not a learning-constant application: {applied!r}")
    info = sig.lookup(head.name)
    if len(args) != info.arity:
        raise MalformedApplication(
            f"{head.name} expects {info.arity} arguments, got {len(args)}")
    if not all(is_normal_value(a) for a in args):
        raise MalformedApplication("arguments must be closed normal values")
    return value_to_term(info.rule(*[term_to_value(a) for a in args]))

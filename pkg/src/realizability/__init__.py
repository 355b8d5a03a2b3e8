"""Workbench for program extraction from classical arithmetic proofs via
learning-based realizability: a typed term kernel with knowledge states,
self-correcting realizers, 1-backtracking Tarski games, moduli of
convergence, update procedures with bar-recursive zero finders, and a
first-order epsilon substitution engine."""

from .kernel import (  # noqa: F401
    BOOL, NAT, STATE, Arrow, Atom, App, BR, BRGuard, Const, FALSE, If,
    KnowledgeStateLike, Lam, Pair, Proj, Product, Rec, SeqLit, SeqOf,
    Signature, StateConst, Succ, TRUE, Term, Type, Var, Y, ZERO, arrows,
    boolean, equal_closed_atomic, evaluate, normalize, numeral,
    numeral_value, step, typecheck,
)
from .states import (  # noqa: F401
    EMPTY, KnowledgeState, LearningSignature, PredicateSig, cup, leq_state,
    state,
)
from .oracle import OracleTerm, WIChain, approximate, zero_loop  # noqa: F401

__version__ = "0.1.0"

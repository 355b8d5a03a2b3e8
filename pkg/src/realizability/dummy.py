"""Dummy inhabitants for every kernel type."""

from __future__ import annotations

from .kernel import (
    EMPTY_STATE, FALSE, ZERO, Arrow, Lam, Pair, Product, SeqLit, SeqOf,
    StateConst, Term, Type, NatT, BoolT, StateT, KernelError,
)


def dummy(t: Type) -> Term:
    """The canonical dummy term of type ``t``."""
    if isinstance(t, NatT):
        return ZERO
    if isinstance(t, BoolT):
        return FALSE
    if isinstance(t, StateT):
        return StateConst(EMPTY_STATE)
    if isinstance(t, Arrow):
        return Lam("_", t.dom, dummy(t.cod))
    if isinstance(t, Product):
        return Pair(dummy(t.left), dummy(t.right))
    if isinstance(t, SeqOf):
        return SeqLit(t.elem, ())
    raise KernelError(f"no dummy for type {t!r}")

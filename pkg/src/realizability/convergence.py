"""Moduli of convergence and the moduli-carrying interpretation.

A modulus of convergence for a function sequence hands out, for every
``h >= id``, intervals ``[M_h(z), h(M_h(z))]`` on which the sequence is
constant.  Moduli compose: ``join`` makes one modulus serve two
sequences, ``h1_merge`` threads a family of moduli through a selector
using its argument as a continuation, and ``h_lift`` raises the
construction through arrow and product types.

``interpret`` translates a term over the single function oracle into the
model whose atomic values are (modulus, point sequence) pairs; from the
translation of a state-valued term one reads off a bound on its own
learning chain, which is the moduli-driven zero finder."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .kernel import (
    App, BOOL, Const, FalseC, If, KnowledgeStateLike, Lam, NAT, Pair, Proj,
    Rec, STATE, SeqLit, StateConst, Succ, Term, TrueC, Type, Var, ZeroC,
    arrows, evaluate, numeral, KernelError,
)
from .oracle import OracleTerm, nf_state
from .states import EMPTY, KnowledgeState, LearningSignature, cup
from .games import encode_nat_list, decode_nat_list


class UnsupportedConstant(KernelError):
    pass


IntFun = Callable[[int], int]
Modulus = Callable[[IntFun], IntFun]

PHI = "PHI"  # the distinguished unary function oracle


def identity_modulus(h: IntFun) -> IntFun:
    return lambda z: z


def join(m: Modulus, n: Modulus) -> Modulus:
    """A modulus serving both of the moduli's target functions: the first
    modulus runs with the second one appended to its continuation."""

    def joined(h: IntFun) -> IntFun:
        def at(z: int) -> int:
            nh = n(h)
            return nh(m(lambda x: h(nh(x)))(z))
        return at

    return joined


def join_all(moduli: list[Modulus]) -> Modulus:
    out = moduli[0]
    for m in moduli[1:]:
        out = join(out, m)
    return out


def h1_merge(m: Modulus, family: Callable[[object], Modulus], g: IntFun) -> Modulus:
    """Modulus for ``n -> f_{g(n)}(n)`` given a modulus for ``g`` and one
    for each member of the family; the family's modulus at the selected
    value is used as a continuation inside ``m``."""

    def merged(h: IntFun) -> IntFun:
        def n_prime(k: int) -> int:
            return family(g(k))(h)(k)

        def at(z: int) -> int:
            return n_prime(m(lambda x: h(n_prime(x)))(z))
        return at

    return merged


# ---------------------------------------------------------------------------
# Star values: the moduli-carrying model
# ---------------------------------------------------------------------------

@dataclass
class StarAtomic:
    modulus: Modulus
    points: Callable[[int], object]  # int | bool | KnowledgeState per index


StarValue = Union[StarAtomic, tuple, Callable]


def star_const(value: object) -> StarAtomic:
    return StarAtomic(identity_modulus, lambda _n: value)


def h_lift(base: StarAtomic, family: Callable[[object], StarValue]) -> StarValue:
    """Lift a family of interpretations through the base's atomic selector:
    the interpretation of ``u t`` from those of ``t`` and of ``u a`` for
    every atomic value ``a``."""
    probe = family(base.points(0))
    if isinstance(probe, StarAtomic):
        fam_mod = lambda a: family(a).modulus
        fam_pts = lambda a: family(a).points
        return StarAtomic(
            h1_merge(base.modulus, fam_mod, lambda n: base.points(n)),
            lambda n: fam_pts(base.points(n))(n))
    if isinstance(probe, tuple):
        return (h_lift(base, lambda a: family(a)[0]),
                h_lift(base, lambda a: family(a)[1]))
    return lambda arg: h_lift(base, lambda a: family(a)(arg))


# ---------------------------------------------------------------------------
# Function chains
# ---------------------------------------------------------------------------

@dataclass
class FunChain:
    """Weakly increasing chain of functions (nonzero values persist).

    Point accesses are memoized and monitored: an access revealing that a
    nonzero value failed to persist raises instead of silently corrupting
    the moduli built on top."""

    generator: Callable[[int], IntFun]

    def __post_init__(self) -> None:
        self._memo: dict[int, IntFun] = {}
        self._seen: dict[int, dict[int, int]] = {}  # point -> index -> value

    def _observe(self, i: int, n: int, v: int) -> int:
        history = self._seen.setdefault(n, {})
        for j, w in history.items():
            earlier, later = (w, v) if j <= i else (v, w)
            if earlier != 0 and earlier != later:
                raise ValueError(
                    f"chain not weakly increasing at point {n}: "
                    f"index {min(i, j)} has {earlier}, index {max(i, j)} has {later}")
        history[i] = v
        return v

    def __call__(self, i: int) -> IntFun:
        if i not in self._memo:
            raw = self.generator(i)
            self._memo[i] = lambda n, _i=i, _raw=raw: self._observe(_i, n, _raw(n))
        return self._memo[i]

    def check_monotone(self, upto: int, points: range = range(0, 24)) -> None:
        for i in range(upto + 1):
            for n in points:
                self(i)(n)

    @staticmethod
    def constant(f: IntFun) -> "FunChain":
        return FunChain(lambda _i: f)


# ---------------------------------------------------------------------------
# Interpretation of terms over the function oracle
# ---------------------------------------------------------------------------

def interpret(t: Term, chain: FunChain, sig: LearningSignature,
              phi_name: str = PHI) -> StarValue:
    """The moduli-carrying interpretation of a term of the recursion
    calculus extended with the unary oracle ``phi_name``.

    For a closed atomic-typed term the result's point sequence agrees with
    evaluating the term at each chain element, and the modulus component
    witnesses the convergence of that sequence."""
    return _interp(t, {}, chain, sig, phi_name)


def eval_at_chain(t: Term, chain: FunChain, index: int,
                  sig: LearningSignature, phi_name: str = PHI) -> object:
    """Evaluate ``t`` with the oracle bound to ``chain(index)``."""
    inner = sig.copy()
    f = chain(index)
    inner.consts = dict(inner.consts)
    inner.register(phi_name, NAT >> NAT, lambda q: f(q))
    return evaluate(t, inner)


def _phi_star(chain: FunChain) -> Callable:
    def apply(mg: StarValue) -> StarValue:
        assert isinstance(mg, StarAtomic)

        def family(n: object) -> StarAtomic:
            assert isinstance(n, int)

            def modulus(h: IntFun) -> IntFun:
                return lambda m: m if chain(m)(n) == chain(h(m))(n) else h(m)

            return StarAtomic(modulus, lambda m: chain(m)(n))

        return h_lift(mg, family)

    return apply


def _first_order_star(rule: Callable, arity: int) -> StarValue:
    def gather(collected: list[StarAtomic]) -> StarValue:
        if len(collected) == arity:
            if arity == 0:
                return star_const(rule())
            return StarAtomic(
                join_all([c.modulus for c in collected]),
                lambda n: rule(*[c.points(n) for c in collected]))
        return lambda v: gather(collected + [v])

    return gather([])


def _rec_star() -> Callable:
    def apply(i_star: StarValue) -> Callable:
        def apply2(l_star: Callable) -> Callable:
            def apply3(mg: StarValue) -> StarValue:
                assert isinstance(mg, StarAtomic)

                def family(n: object) -> StarValue:
                    assert isinstance(n, int)
                    out = i_star
                    for k in range(n):
                        out = l_star(star_const(k))(out)
                    return out

                return h_lift(mg, family)
            return apply3
        return apply2
    return apply


def _if_star() -> Callable:
    def apply(mg: StarValue) -> Callable:
        def apply2(l1: StarValue) -> Callable:
            def apply3(l2: StarValue) -> StarValue:
                assert isinstance(mg, StarAtomic)
                return h_lift(mg, lambda b: l1 if b else l2)
            return apply3
        return apply2
    return apply


def _interp(t: Term, env: dict, chain: FunChain, sig: LearningSignature,
            phi_name: str) -> StarValue:
    match t:
        case Var(name, _):
            return env[name]
        case ZeroC():
            return star_const(0)
        case TrueC():
            return star_const(True)
        case FalseC():
            return star_const(False)
        case StateConst(s):
            return star_const(s)
        case Succ(a):
            inner = _interp(a, env, chain, sig, phi_name)
            assert isinstance(inner, StarAtomic)
            return StarAtomic(inner.modulus, lambda n: inner.points(n) + 1)
        case Const(name):
            if name == phi_name:
                return _phi_star(chain)
            info = sig.lookup(name)
            if info.rule is None:
                raise UnsupportedConstant(
                    f"{name} has no rules; code it through the function oracle")
            if info.arity == 0:
                return star_const(info.rule())
            return _first_order_star(info.rule, info.arity)
        case If(_):
            return _if_star()
        case Rec(_):
            return _rec_star()
        case App(f, a):
            fv = _interp(f, env, chain, sig, phi_name)
            av = _interp(a, env, chain, sig, phi_name)
            assert callable(fv)
            return fv(av)
        case Lam(x, _, body):
            return lambda v: _interp(body, {**env, x: v}, chain, sig, phi_name)
        case Pair(l, r):
            return (_interp(l, env, chain, sig, phi_name),
                    _interp(r, env, chain, sig, phi_name))
        case Proj(i, a):
            av = _interp(a, env, chain, sig, phi_name)
            assert isinstance(av, tuple)
            return av[i]
    raise UnsupportedConstant(f"term form not interpretable: {t!r}")


# ---------------------------------------------------------------------------
# Sampling policy and reports
# ---------------------------------------------------------------------------

SAMPLE_HS: dict[str, IntFun] = {
    "id": lambda m: m,
    "+1": lambda m: m + 1,
    "+5": lambda m: m + 5,
    "double": lambda m: 2 * m,
}


@dataclass
class ModulusRow:
    h_name: str
    z: int
    start: int
    end: int
    value: object


def modulus_rows(t: Term, chain: FunChain, sig: LearningSignature,
                 zs: range = range(0, 21),
                 hs: Optional[dict[str, IntFun]] = None,
                 phi_name: str = PHI) -> list[ModulusRow]:
    """Sample the interpreted modulus and observe the claimed-constant
    intervals; raises if a law violation is found."""
    sv = interpret(t, chain, sig, phi_name)
    assert isinstance(sv, StarAtomic)
    rows = []
    for name, h in (hs or SAMPLE_HS).items():
        mh = sv.modulus(h)
        for z in zs:
            start = mh(z)
            end = h(start)
            if start < z:
                raise AssertionError(f"modulus not inflationary at h={name}, z={z}")
            values = {eval_at_chain(t, chain, m, sig, phi_name)
                      for m in range(start, end + 1)}
            if len(values) != 1:
                raise AssertionError(
                    f"interval [{start}, {end}] not constant at h={name}, z={z}")
            rows.append(ModulusRow(name, z, start, end, values.pop()))
    return rows


def modulus_report(rows: list[ModulusRow]) -> str:
    lines = ["h\tz\tM_h(z)\th(M_h(z))\tvalue"]
    for r in rows:
        lines.append(f"{r.h_name}\t{r.z}\t{r.start}\t{r.end}\t{r.value}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# The moduli-driven zero finder
# ---------------------------------------------------------------------------

def _oracle_predicates(t: OracleTerm) -> list[str]:
    preds = set()
    for name in t.oracle_names():
        if name.startswith(("Chi_", "Phi_", "Add_")):
            preds.add(name.split("_", 1)[1])
    return sorted(preds)


def phi_coded_term(t: OracleTerm, preds: list[str]) -> Term:
    """Replace the oracle constants by decodings of the single function
    oracle: the oracle's value at the coded question (predicate index plus
    arguments) carries witness+1, with 0 the no-answer default."""
    sig = t.sig
    coded: dict[str, Term] = {}
    for idx, pred in enumerate(preds):
        k = sig.predicates[pred].arity
        qname = f"qcode_{pred}"
        if not sig.has(qname):
            frozen = idx
            sig.register(qname, arrows(*([NAT] * k), NAT) if k else NAT,
                         lambda *args, _i=frozen: encode_nat_list([_i, *args]))
        xs = [Var(f"q{j}", NAT) for j in range(k)]
        q = Const(qname)
        for x in xs:
            q = App(q, x)
        phi_q = App(Const(PHI), q)
        chi_body = Const("notb")(Const("eq")(phi_q, numeral(0)))
        phi_body = Const("sub")(phi_q, numeral(1))
        m = Var("qm", NAT)
        add_inner = Const(f"add_{pred}")
        add_inner = App(add_inner, StateConst(EMPTY))
        for x in xs:
            add_inner = App(add_inner, x)
        add_body = If(STATE)(Const("eq")(phi_q, numeral(0)),
                             App(add_inner, m), StateConst(EMPTY))

        def close(body: Term, with_m: bool = False) -> Term:
            out = body
            if with_m:
                out = Lam("qm", NAT, out)
            for x in reversed(xs):
                out = Lam(x.name, NAT, out)
            return out

        coded[f"Chi_{pred}"] = close(chi_body)
        coded[f"Phi_{pred}"] = close(phi_body)
        coded[f"Add_{pred}"] = close(add_body, with_m=True)
    from .oracle import map_consts
    return map_consts(t.term, lambda n: coded.get(n))


def state_to_fun(sig: LearningSignature, preds: list[str],
                 s: KnowledgeState) -> IntFun:
    """The function coding a state: witness+1 at answered questions."""
    index = {p: i for i, p in enumerate(preds)}

    def f(q: int) -> int:
        parts = decode_nat_list(q)
        if not parts:
            return 0
        pid, args = parts[0], tuple(parts[1:])
        for pred, i in index.items():
            if i == pid:
                w = s.lookup(pred, args)
                return 0 if w is None else w + 1
        return 0

    return f


@dataclass
class ModuliZero:
    state: KnowledgeState
    index: int                      # the chain index k with sigma_{k+1} returned
    sigma: list[KnowledgeState]     # the loop's own trace up to the answer


def zero_via_moduli_report(t: OracleTerm, n: int,
                           max_steps: int = 10_000) -> ModuliZero:
    """Zero finding bounded by a modulus of convergence.

    The term family's oracles are coded through the single function
    oracle; the interpretation of the coded term over the loop's own
    chain yields a modulus, whose value at the successor function bounds
    the loop index where the term goes quiet."""
    sig = t.sig
    preds = _oracle_predicates(t)
    if not sig.has(PHI):
        sig.register(PHI, NAT >> NAT)  # oracle: no rules outside evaluation
    coded = phi_coded_term(t, preds)
    t_n = App(coded, numeral(n))
    direct_n = OracleTerm(App(t.term, numeral(n)), sig)

    sigma: list[KnowledgeState] = [EMPTY]

    def ensure(i: int) -> KnowledgeState:
        while len(sigma) <= i:
            prev = sigma[-1]
            sigma.append(cup(prev, nf_state(direct_n, prev)))
            if len(sigma) > max_steps:
                raise KernelError("zero chain did not stabilize")
        return sigma[i]

    chain = FunChain(lambda i: state_to_fun(sig, preds, ensure(i)))
    sv = interpret(t_n, chain, sig)
    assert isinstance(sv, StarAtomic)
    k = sv.modulus(lambda m: m + 1)(0)
    answer = ensure(k + 1)
    if nf_state(direct_n, answer) != EMPTY:
        raise AssertionError("modulus bound did not reach a zero")
    return ModuliZero(answer, k, sigma[: k + 2])


def zero_via_moduli(t: OracleTerm, n: int) -> KnowledgeState:
    """State at which the n-th member of the family evaluates to the empty
    state, reached at the index bounded by the interpreted modulus."""
    return zero_via_moduli_report(t, n).state

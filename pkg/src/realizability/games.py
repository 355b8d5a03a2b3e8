"""Tarski games, 1-backtracking, realizer-derived strategies, and the
translation of winning backtracking strategies back into realizers.

Positions are implication-free closed formulas; Eloise owns existential
and disjunctive positions, Abelard universal and conjunctive ones.  In
the backtracking variant Eloise may retract to any earlier prefix of the
current play whose end she owns (retracting to the same lost atom is the
degenerate case), growing a knowledge state as she learns from lost
atoms.

The realizer-to-strategy direction threads a realizer along the play and
consults its components for every choice; the converse direction codes
plays as numerals, mines improvement facts from lost plays into a state
of play-pairs, and assembles a realizer from state-indexed strategy
operators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .kernel import (
    App, BOOL, Const, Lam, NAT, Pair, Proj, STATE, StateConst, Succ, Term,
    Var, eval_bool, eval_nat, eval_state, evaluate, numeral, DEFAULT_FUEL,
)
from .logic import (
    And, Atomic, ExistsNat, ForallNat, Formula, Implies, Or, implication_free,
    print_formula, subst_formula,
)
from .oracle import OracleTerm, approximate
from .realizer import p0, p1, p2
from .states import EMPTY, KnowledgeState, LearningSignature, PredicateSig, cup
from .syntax import print_state


class GameError(Exception):
    pass


class AtomicPosition(GameError):
    pass


class IllegalMove(GameError):
    def __init__(self, player: str, reason: str):
        super().__init__(f"illegal move by {player}: {reason}")
        self.player = player


class MoveBudgetExceeded(GameError):
    pass


class NonTotalStrategy(GameError):
    pass


Move = Union[int, str]  # numeral for quantifiers, "left"/"right" for connectives


def eloise_owns(a: Formula) -> bool:
    return isinstance(a, (ExistsNat, Or))


def abelard_owns(a: Formula) -> bool:
    return isinstance(a, (ForallNat, And))


def position_after(a: Formula, move: Move) -> Formula:
    match a:
        case ExistsNat(x, b) | ForallNat(x, b):
            if not isinstance(move, int) or move < 0:
                raise IllegalMove("?", f"quantifier moves are numerals, got {move!r}")
            return subst_formula(b, x, numeral(move))
        case Or(l, r) | And(l, r):
            if move == "left" or move == 0:
                return l
            if move == "right" or move == 1:
                return r
            raise IllegalMove("?", f"connective moves are left/right, got {move!r}")
    raise AtomicPosition(print_formula(a))


def legal_moves(a: Formula, bound: int = 8) -> list[tuple[Move, Formula]]:
    """Moves from a position; quantifier moves enumerate numerals up to
    ``bound`` (callers paginate beyond)."""
    match a:
        case ExistsNat(_, _) | ForallNat(_, _):
            return [(n, position_after(a, n)) for n in range(bound + 1)]
        case Or(_, _) | And(_, _):
            return [("left", position_after(a, "left")),
                    ("right", position_after(a, "right"))]
    raise AtomicPosition(print_formula(a))


def atom_truth(a: Formula, sig: LearningSignature, fuel: int = DEFAULT_FUEL) -> bool:
    assert isinstance(a, Atomic)
    return evaluate(a.body, sig, fuel) is True


# ---------------------------------------------------------------------------
# Plays
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Play:
    """A walk in the Tarski game, stored as the root plus the move list."""

    root: Formula
    moves: tuple[Move, ...] = ()

    def positions(self) -> list[Formula]:
        out = [self.root]
        for m in self.moves:
            out.append(position_after(out[-1], m))
        return out

    @property
    def end(self) -> Formula:
        return self.positions()[-1]

    def extended(self, move: Move) -> "Play":
        return Play(self.root, self.moves + (move,))

    def prefix(self, length: int) -> "Play":
        """Prefix with ``length`` positions (length-1 moves)."""
        return Play(self.root, self.moves[: length - 1])

    def __len__(self) -> int:
        return len(self.moves) + 1

    def is_prefix_of(self, other: "Play") -> bool:
        return (self.root == other.root
                and other.moves[: len(self.moves)] == self.moves)


def complete(play: Play) -> bool:
    return isinstance(play.end, Atomic)


def won(play: Play, sig: LearningSignature) -> bool:
    return complete(play) and atom_truth(play.end, sig)


# ---------------------------------------------------------------------------
# Play coding: length-prefixed base emission with a decoder
# ---------------------------------------------------------------------------

def _gamma_bits(n: int) -> str:
    """Elias-gamma code of n+1 (handles zero)."""
    b = bin(n + 1)[2:]
    return "0" * (len(b) - 1) + b


def encode_nat_list(xs: Sequence[int]) -> int:
    bits = "1" + _gamma_bits(len(xs)) + "".join(_gamma_bits(x) for x in xs)
    return int(bits, 2)


def decode_nat_list(code: int) -> Optional[list[int]]:
    if code < 1:
        return None
    bits = bin(code)[2:]
    pos = 1  # skip the sentinel bit

    def read() -> Optional[int]:
        nonlocal pos
        zeros = 0
        while pos < len(bits) and bits[pos] == "0":
            zeros += 1
            pos += 1
        if pos + zeros + 1 > len(bits):
            return None
        value = int(bits[pos: pos + zeros + 1], 2)
        pos += zeros + 1
        return value - 1

    length = read()
    if length is None:
        return None
    out = []
    for _ in range(length):
        v = read()
        if v is None:
            return None
        out.append(v)
    return out if pos == len(bits) else None


def _move_to_nat(m: Move) -> int:
    if m == "left":
        return 0
    if m == "right":
        return 1
    return int(m)


class PlayCode:
    """Injective numeral coding of plays and backtracking plays of a fixed
    root formula, with a decoder."""

    def __init__(self, root: Formula):
        self.root = root

    def encode_play(self, play: Play) -> int:
        return encode_nat_list([_move_to_nat(m) for m in play.moves])

    def decode_play(self, code: int) -> Optional[Play]:
        moves = decode_nat_list(code)
        if moves is None:
            return None
        play = Play(self.root)
        for m in moves:
            pos = play.end
            if isinstance(pos, (Or, And)):
                if m not in (0, 1):
                    return None
                play = play.extended("left" if m == 0 else "right")
            elif isinstance(pos, (ExistsNat, ForallNat)):
                play = play.extended(m)
            else:
                return None
        return play

    def encode_bplay(self, plays: Sequence[Play]) -> int:
        return encode_nat_list([self.encode_play(p) for p in plays])

    def decode_bplay(self, code: int) -> Optional[list[Play]]:
        parts = decode_nat_list(code)
        if parts is None:
            return None
        out = []
        for c in parts:
            p = self.decode_play(c)
            if p is None:
                return None
            out.append(p)
        return out


# ---------------------------------------------------------------------------
# The backtracking game engine
# ---------------------------------------------------------------------------

@dataclass
class MoveRecord:
    index: int
    player: str                       # "eloise" | "abelard"
    kind: str                         # "move" | "backtrack" | "resign"
    position: str                     # text of the end position after the move
    state: str                        # state literal after the move
    backtrack_to: Optional[int] = None  # target play length (positions)

    def as_dict(self) -> dict:
        out = {"index": self.index, "player": self.player, "kind": self.kind,
               "position": self.position, "knowledge": self.state}
        if self.backtrack_to is not None:
            out["backtrackTo"] = self.backtrack_to
        return out


@dataclass
class Transcript:
    winner: str
    records: list[MoveRecord]
    bplay: list[Play]
    final_state: KnowledgeState
    eloise_backtracks: int


@dataclass
class GameView:
    """What a strategy is allowed to see."""

    root: Formula
    bplay: list[Play]
    state: KnowledgeState
    sig: LearningSignature

    @property
    def play(self) -> Play:
        return self.bplay[-1]


EloiseAction = tuple[str, object]  # ("step", move) | ("backtrack", target_len)


class EloiseStrategy:
    """Eloise strategies return ("step", move) or ("backtrack", target_len);
    learning strategies update view.state in place when they learn."""

    flavor = "scripted"

    def begin(self, view: GameView) -> None:  # pragma: no cover - default noop
        pass

    def act(self, view: GameView) -> EloiseAction:
        raise NotImplementedError


class AbelardStrategy:
    def act(self, view: GameView) -> Move:
        raise NotImplementedError


class GameSession:
    """Incremental backtracking game: Eloise is driven by a strategy, the
    opponent's moves arrive from outside (a strategy, a script, or a user).

    ``advance`` runs Eloise until the game is over or it is the opponent's
    turn; the record list doubles as the event stream."""

    def __init__(self, root: Formula, eloise: EloiseStrategy,
                 sig: LearningSignature, max_moves: int = 10_000,
                 audit: bool = True):
        if not implication_free(root):
            raise GameError("games are defined for implication-free formulas only")
        self.root = root
        self.sig = sig
        self.eloise = eloise
        self.max_moves = max_moves
        self.audit = audit
        self.bplay: list[Play] = [Play(root)]
        self.records: list[MoveRecord] = []
        self.backtracks = 0
        self.winner: Optional[str] = None
        self.view = GameView(root, self.bplay, EMPTY, sig)
        self._moves_left = max_moves
        eloise.begin(self.view)

    @property
    def finished(self) -> bool:
        return self.winner is not None

    @property
    def current(self) -> Play:
        return self.bplay[-1]

    def _spend(self) -> None:
        self._moves_left -= 1
        if self._moves_left < 0:
            raise MoveBudgetExceeded(f"no winner within {self.max_moves} moves")

    def _record(self, player: str, kind: str, target: Optional[int] = None) -> None:
        self.records.append(MoveRecord(len(self.records), player, kind,
                                       print_formula(self.current.end),
                                       print_state(self.view.state), target))

    def awaiting_abelard(self) -> bool:
        return (not self.finished) and abelard_owns(self.current.end)

    def offer_abelard(self, move: Move) -> None:
        """Apply an opponent move (validated) and let Eloise respond."""
        if self.finished:
            raise IllegalMove("abelard", "the game is over")
        end = self.current.end
        if not abelard_owns(end):
            raise IllegalMove("abelard", "not an opponent position")
        position_after(end, move)  # raises IllegalMove on bad input
        self._spend()
        self.bplay.append(self.current.extended(move))
        self._record("abelard", "move")
        self.advance()

    def resign(self) -> None:
        if not self.finished:
            self._record("eloise", "resign")
            self.winner = "abelard"

    def advance(self) -> None:
        """Run Eloise until the opponent must move or the game ends."""
        while not self.finished:
            end = self.current.end
            if isinstance(end, Atomic):
                if atom_truth(end, self.sig):
                    self.winner = "eloise"
                    return
                if not any(eloise_owns(p) for p in self.current.positions()):
                    self.winner = "abelard"
                    return
                action = self.eloise.act(self.view)
                if action[0] != "backtrack":
                    self.winner = "abelard"
                    return
                self._spend()
                _apply_backtrack(action[1], self.view, self.bplay, self.sig, self.audit)
                self.backtracks += 1
                self._record("eloise", "backtrack", action[1])
                continue
            if eloise_owns(end):
                action = self.eloise.act(self.view)
                self._spend()
                if action[0] == "step":
                    move = action[1]
                    position_after(end, move)  # raises IllegalMove on bad input
                    self.bplay.append(self.current.extended(move))
                    self._record("eloise", "move")
                elif action[0] == "backtrack":
                    _apply_backtrack(action[1], self.view, self.bplay, self.sig,
                                     self.audit)
                    self.backtracks += 1
                    self._record("eloise", "backtrack", action[1])
                elif action[0] == "resign":
                    self.resign()
                else:
                    raise IllegalMove("eloise", f"unknown action {action!r}")
                continue
            return  # opponent's turn

    def transcript(self) -> Transcript:
        assert self.winner is not None
        return Transcript(self.winner, self.records, self.bplay,
                          self.view.state, self.backtracks)


def run_1back(a: Formula, eloise: EloiseStrategy, abelard: AbelardStrategy,
              sig: LearningSignature, max_moves: int = 10_000,
              audit: bool = True) -> Transcript:
    """Play the backtracking game on a closed implication-free formula.

    Enforces move legality on both sides; the winner is Eloise exactly
    when the final play ends at a true atom."""
    session = GameSession(a, eloise, sig, max_moves, audit)
    session.advance()
    while not session.finished:
        session.offer_abelard(abelard.act(session.view))
    return session.transcript()


def _apply_backtrack(target_len: object, view: GameView, bplay: list[Play],
                     sig: LearningSignature, audit: bool) -> None:
    current = bplay[-1]
    if not isinstance(target_len, int) or not (1 <= target_len <= len(current)):
        raise IllegalMove("eloise", f"bad backtrack target {target_len!r}")
    target = current.prefix(target_len)
    if audit:
        # legality: the abandoned play is not won; the target's end is
        # Eloise-owned, or the backtrack is the degenerate retraction of a
        # lost atom (target = current play, used to retry under a larger
        # state).
        if won(current, sig):
            raise IllegalMove("eloise", "cannot abandon a won play")
        degenerate = target_len == len(current) and isinstance(current.end, Atomic)
        if not (eloise_owns(target.end) or degenerate):
            raise IllegalMove("eloise", "backtrack target must end at an own position")
    bplay.append(target)


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------

class RealizerEloise(EloiseStrategy):
    """The strategy read off a realizer: numerals from first projections,
    branch flags from the boolean slot, learned states from lost atoms,
    backtracking to the earliest choice that changes."""

    flavor = "realizer-derived"

    def __init__(self, realizer: OracleTerm, fuel: int = DEFAULT_FUEL):
        self.realizer = realizer
        self.fuel = fuel
        self._rho: list[Term] = []  # realizer per position of the current play

    def begin(self, view: GameView) -> None:
        self._rho = [self.realizer.term]

    # -- internals ----------------------------------------------------------

    def _sync(self, view: GameView) -> None:
        """Recompute rho along the current play (cheap: plays are short)."""
        play = view.play
        positions = play.positions()
        rho = [self.realizer.term]
        for pos, move in zip(positions, play.moves):
            t = rho[-1]
            match pos:
                case ForallNat(_, _):
                    rho.append(App(t, numeral(int(move))))
                case ExistsNat(_, _):
                    rho.append(Proj(1, t))
                case And(_, _):
                    rho.append(Proj(0 if move in (0, "left") else 1, t))
                case Or(_, _):
                    rho.append(p1(t) if move in (0, "left") else p2(t))
                case _:
                    raise GameError("move past an atomic position")
        self._rho = rho

    def _eval_nat(self, t: Term, view: GameView) -> int:
        return eval_nat(approximate(OracleTerm(t, view.sig), view.state),
                        view.sig, self.fuel)

    def _eval_bool(self, t: Term, view: GameView) -> bool:
        return eval_bool(approximate(OracleTerm(t, view.sig), view.state),
                         view.sig, self.fuel)

    def act(self, view: GameView) -> EloiseAction:
        self._sync(view)
        end = view.play.end
        t = self._rho[-1]
        if isinstance(end, ExistsNat):
            return ("step", self._eval_nat(Proj(0, t), view))
        if isinstance(end, Or):
            return ("step", "left" if self._eval_bool(p0(t), view) else "right")
        if isinstance(end, Atomic):
            # lost atom: learn, then find the earliest choice that changes
            new_state = cup(view.state, eval_state(
                approximate(OracleTerm(t, view.sig), view.state), view.sig, self.fuel))
            view.state = new_state
            positions = view.play.positions()
            for j, (pos, move) in enumerate(zip(positions, view.play.moves)):
                w = self._rho[j]
                if isinstance(pos, ExistsNat):
                    if self._eval_nat(Proj(0, w), view) != int(move):
                        return ("backtrack", j + 1)
                elif isinstance(pos, Or):
                    flag = self._eval_bool(p0(w), view)
                    if flag != (move in (0, "left")):
                        return ("backtrack", j + 1)
            return ("backtrack", len(positions))
        raise GameError("not an Eloise position")


class ScriptedEloise(EloiseStrategy):
    flavor = "scripted"

    def __init__(self, actions: Sequence[EloiseAction]):
        self.actions = list(actions)
        self._i = 0

    def act(self, view: GameView) -> EloiseAction:
        if self._i >= len(self.actions):
            raise NonTotalStrategy("scripted strategy ran out of moves")
        out = self.actions[self._i]
        self._i += 1
        return out


class RandomAbelard(AbelardStrategy):
    def __init__(self, rng, bound: int = 8):
        self.rng = rng
        self.bound = bound

    def act(self, view: GameView) -> Move:
        end = view.play.end
        if isinstance(end, ForallNat):
            return self.rng.randrange(self.bound + 1)
        if isinstance(end, And):
            return "left" if self.rng.random() < 0.5 else "right"
        raise GameError("not an Abelard position")


class ScriptedAbelard(AbelardStrategy):
    def __init__(self, moves: Sequence[Move]):
        self.moves = list(moves)
        self._i = 0

    def act(self, view: GameView) -> Move:
        if self._i >= len(self.moves):
            raise NonTotalStrategy("scripted Abelard ran out of moves")
        out = self.moves[self._i]
        self._i += 1
        return out


def bounded_truth(a: Formula, sig: LearningSignature, scan: int = 32) -> bool:
    """Classical truth with quantifiers scanned up to a bound (test helper)."""
    match a:
        case Atomic(_):
            return atom_truth(a, sig)
        case And(l, r):
            return bounded_truth(l, sig, scan) and bounded_truth(r, sig, scan)
        case Or(l, r):
            return bounded_truth(l, sig, scan) or bounded_truth(r, sig, scan)
        case ForallNat(x, b):
            return all(bounded_truth(subst_formula(b, x, numeral(n)), sig, scan)
                       for n in range(scan + 1))
        case ExistsNat(x, b):
            return any(bounded_truth(subst_formula(b, x, numeral(n)), sig, scan)
                       for n in range(scan + 1))
    raise GameError("truth scan over implications is unsupported")


class SpoilerAbelard(AbelardStrategy):
    """Plays towards falsity: picks a false conjunct when there is one and
    numerals that refute universals within the scan bound."""

    def __init__(self, scan: int = 32):
        self.scan = scan

    def act(self, view: GameView) -> Move:
        end = view.play.end
        if isinstance(end, And):
            if not bounded_truth(end.left, view.sig, self.scan):
                return "left"
            return "right" if not bounded_truth(end.right, view.sig, self.scan) else "left"
        if isinstance(end, ForallNat):
            for n in range(self.scan + 1):
                if not bounded_truth(subst_formula(end.body, end.var, numeral(n)),
                                     view.sig, self.scan):
                    return n
            return 0
        raise GameError("not an Abelard position")


# ---------------------------------------------------------------------------
# Winning strategies for the backtracking game (host level)
# ---------------------------------------------------------------------------

OmegaFn = Callable[[list[Play]], Play]


class HandwrittenEM1Omega:
    """A winning strategy for the backtracking game on the excluded-middle
    instance, written directly: try the universal side, learn Abelard's
    counterexample from the lost atom, then replay the existential side
    with that witness.  Backtracks only at atoms."""

    def __init__(self, sig: LearningSignature, pred: str = "P"):
        self.sig = sig
        self.pred = pred

    def _known_witness(self, bplay: list[Play], n: int) -> Optional[int]:
        for q in reversed(bplay[:-1]):
            if (len(q.moves) == 3 and q.moves[0] == n
                    and q.moves[1] in (1, "right") and complete(q)
                    and not won(q, self.sig)):
                return int(q.moves[2])
        return None

    def __call__(self, bplay: list[Play]) -> Play:
        current = bplay[-1]
        end = current.end
        if isinstance(end, Or):
            n = int(current.moves[0])
            m = self._known_witness(bplay, n)
            return current.extended("left" if m is not None else "right")
        if isinstance(end, ExistsNat):
            n = int(current.moves[0])
            m = self._known_witness(bplay, n)
            return current.extended(m if m is not None else 0)
        if isinstance(end, Atomic):
            # lost atom: retract to the disjunction
            return current.prefix(2)
        raise NonTotalStrategy(f"not an Eloise decision point: {print_formula(end)}")


class OmegaEloise(EloiseStrategy):
    """Adapter driving the engine from a host winning strategy."""

    flavor = "scripted"

    def __init__(self, omega: OmegaFn):
        self.omega = omega

    def act(self, view: GameView) -> EloiseAction:
        nxt = self.omega(list(view.bplay))
        current = view.play
        if nxt.is_prefix_of(current) and len(nxt) <= len(current):
            return ("backtrack", len(nxt))
        if current.is_prefix_of(nxt) and len(nxt) == len(current) + 1:
            return ("step", nxt.moves[-1])
        raise NonTotalStrategy("strategy produced a non-adjacent play")


def _dummy_forward(play: Play) -> Play:
    end = play.end
    if isinstance(end, ExistsNat):
        return play.extended(0)
    if isinstance(end, Or):
        return play.extended("left")
    raise NonTotalStrategy("no dummy move from this position")


def normalize_backtracking(inner: OmegaFn, sig: LearningSignature) -> OmegaFn:
    """Delay backtracking moves until the play is in front of an atom.

    The returned strategy is a pure function of the backtracking play: it
    replays the history, simulating the inner strategy on a virtual play
    in which its early backtracks happened immediately, while physically
    descending by dummy moves until an atom is reached.
    """

    def classify(prev: Play, cur: Play) -> str:
        if prev.is_prefix_of(cur) and len(cur) == len(prev) + 1:
            return "eloise" if eloise_owns(prev.end) else "abelard"
        return "backtrack"

    def replay(bplay: list[Play]) -> tuple[list[Play], Optional[Play]]:
        virtual = [bplay[0]]
        pending: Optional[Play] = None
        for prev, cur in zip(bplay, bplay[1:]):
            kind = classify(prev, cur)
            if pending is not None:
                if kind == "backtrack" and cur == pending:
                    pending = None  # the delayed backtrack fired
                continue  # dummy descent and its Abelard replies
            if kind == "abelard":
                virtual.append(cur)
                continue
            want = inner(virtual)
            if want.is_prefix_of(prev) and len(want) <= len(prev) \
                    and not isinstance(prev.end, Atomic):
                pending = want
                virtual.append(want)
                continue
            virtual.append(cur)
        return virtual, pending

    def normalized(bplay: list[Play]) -> Play:
        virtual, pending = replay(bplay)
        current = bplay[-1]
        if pending is not None:
            if isinstance(current.end, Atomic):
                return pending
            return _dummy_forward(current)
        want = inner(virtual)
        if want.is_prefix_of(current) and len(want) <= len(current) \
                and not isinstance(current.end, Atomic):
            return _dummy_forward(current)
        return want

    return normalized


# ---------------------------------------------------------------------------
# Completeness: winning strategies into learning strategies into realizers
# ---------------------------------------------------------------------------

_pipeline_counter = itertools.count()


class CompletenessPipeline:
    """From a recursive winning strategy for the backtracking game to a
    state-indexed learning strategy and on to a realizer.

    All play bookkeeping runs at the host level over numeral play codes;
    the emitted realizer consults state-indexed strategy operators that
    are ordinary functional constants of the signature.
    """

    def __init__(self, omega: OmegaFn, root: Formula, sig: LearningSignature,
                 assume_normalized: bool = False):
        if not implication_free(root):
            raise GameError("completeness applies to implication-free formulas")
        self.root = root
        self.sig = sig
        self.uid = next(_pipeline_counter)
        self.codec = PlayCode(root)
        self.omega = omega if assume_normalized else normalize_backtracking(omega, sig)
        self.epred = f"E{self.uid}"
        sig.register_predicate(PredicateSig(self.epred, 1, fn=self._improves))

    # -- the improvement relation -------------------------------------------

    def _is_omega_correct(self, plays: list[Play]) -> bool:
        if not plays or plays[0] != Play(self.root):
            return False
        for i in range(len(plays) - 1):
            prev, cur = plays[i], plays[i + 1]
            if prev.is_prefix_of(cur) and len(cur) == len(prev) + 1:
                if isinstance(prev.end, Atomic):
                    return False
                if eloise_owns(prev.end):
                    try:
                        if self.omega(plays[: i + 1]) != cur:
                            return False
                    except Exception:
                        return False
            elif cur.is_prefix_of(prev) and len(cur) <= len(prev):
                if won(prev, self.sig):
                    return False
                degenerate = cur == prev and isinstance(prev.end, Atomic)
                if not (eloise_owns(cur.end) or degenerate):
                    return False
                try:
                    if self.omega(plays[: i + 1]) != cur:
                        return False
                except Exception:
                    return False
            else:
                return False
        return True

    def _improves(self, n: int, m: int) -> bool:
        """E(n, m): n codes an omega-correct backtracking play ending with a
        play q at an Eloise choice point, and m codes an omega-correct
        extension that has returned to q."""
        smaller = self.codec.decode_bplay(n)
        larger = self.codec.decode_bplay(m)
        if smaller is None or larger is None or not smaller:
            return False
        if len(larger) <= len(smaller) or larger[: len(smaller)] != smaller:
            return False
        if larger[-1] != smaller[-1]:
            return False
        if not eloise_owns(smaller[-1].end):
            return False
        return self._is_omega_correct(larger)

    # -- state-indexed operators ---------------------------------------------

    def _chi(self, s: KnowledgeState, n: int) -> bool:
        return s.lookup(self.epred, (n,)) is not None

    def _phi(self, s: KnowledgeState, n: int) -> int:
        w = s.lookup(self.epred, (n,))
        return 0 if w is None else w

    def psi(self, s: KnowledgeState, code: int) -> int:
        """Iterate the improvement map while the state knows a better play."""
        seen = 0
        while self._chi(s, code):
            code = self._phi(s, code)
            seen += 1
            if seen > len(s.atoms) + 1:
                raise NonTotalStrategy("improvement chain does not terminate")
        return code

    def pi(self, s: KnowledgeState, play: Play) -> list[Play]:
        """The backtracking play constructed alongside a straight play."""
        if len(play) == 1:
            code = self.psi(s, self.codec.encode_bplay([Play(self.root)]))
        else:
            q = self.pi(s, play.prefix(len(play) - 1))
            code = self.psi(s, self.codec.encode_bplay(q + [play]))
        out = self.codec.decode_bplay(code)
        if out is None:
            raise NonTotalStrategy("improvement state holds an undecodable play")
        return out

    def lam(self, s: KnowledgeState, bplay: list[Play]) -> KnowledgeState:
        """Mine improvement facts from a lost complete play."""
        if not bplay or not complete(bplay[-1]) or won(bplay[-1], self.sig) \
                or not self._is_omega_correct(bplay):
            return EMPTY
        try:
            target = self.omega(bplay)
        except Exception:
            return EMPTY
        extended = bplay + [target]
        full = self.codec.encode_bplay(extended)
        atoms = []
        for j in range(len(extended) - 1):
            if extended[j] == target:
                prefix_code = self.codec.encode_bplay(extended[: j + 1])
                if s.lookup(self.epred, (prefix_code,)) is None:
                    atoms.append(self.sig.make_atom(self.epred, (prefix_code,), full))
        return KnowledgeState(tuple(atoms))

    # -- the learning strategy ------------------------------------------------

    def omega0_code(self, s: KnowledgeState, play_code: int) -> int:
        """Play-code transformer: the code of the successor play chosen at
        the current state (0 on positions where there is nothing to choose)."""
        play = self.codec.decode_play(play_code)
        if play is None or not eloise_owns(play.end):
            return 0
        try:
            bp = self.pi(s, play)
            nxt = self.omega(bp)
        except Exception:
            return 0
        if not (play.is_prefix_of(nxt) and len(nxt) == len(play) + 1):
            return 0
        return self.codec.encode_play(nxt)

    def omega0_nat(self, s: KnowledgeState, play_code: int) -> int:
        nxt = self.codec.decode_play(self.omega0_code(s, play_code))
        if nxt is None or not nxt.moves:
            return 0
        m = nxt.moves[-1]
        return int(m) if isinstance(m, int) else 0

    def omega0_bool(self, s: KnowledgeState, play_code: int) -> bool:
        nxt = self.codec.decode_play(self.omega0_code(s, play_code))
        if nxt is None or not nxt.moves:
            return True
        return nxt.moves[-1] in (0, "left")

    def omega1(self, s: KnowledgeState, play_code: int) -> KnowledgeState:
        play = self.codec.decode_play(play_code)
        if play is None or not complete(play):
            return EMPTY
        try:
            bp = self.pi(s, play)
        except Exception:
            return EMPTY
        return self.lam(s, bp)

    # -- realizer assembly ----------------------------------------------------

    def to_realizer(self) -> OracleTerm:
        """The realizer assembled from the learning strategy, built over
        state-indexed strategy constants and per-play coding constants."""
        sig = self.sig
        nat_name = f"StratNat{self.uid}"
        bool_name = f"StratBool{self.uid}"
        state_name = f"StratState{self.uid}"
        sig.register_state_indexed(nat_name, [NAT], NAT, self.omega0_nat)
        sig.register_state_indexed(bool_name, [NAT], BOOL, self.omega0_bool)
        sig.register_state_indexed(state_name, [NAT], STATE, self.omega1)
        counter = itertools.count()

        def code_term(moves: list, env: list[str]) -> Term:
            name = f"PlayCode{self.uid}_{next(counter)}"
            codec = self.codec
            frozen = list(moves)
            order = list(env)

            def rule(*vals: int) -> int:
                play = Play(self.root)
                values = dict(zip(order, vals))
                for m in frozen:
                    if isinstance(m, tuple):
                        play = play.extended(values[m[1]])
                    else:
                        play = play.extended(m)
                return codec.encode_play(play)

            from .kernel import arrows as _arrows
            sig.register(name, _arrows(*([NAT] * len(order) + [NAT])), rule)
            out: Term = Const(name)
            for v in order:
                out = App(out, Var(v, NAT))
            return out

        def build(formula: Formula, moves: list, env: list[str]) -> Term:
            match formula:
                case ForallNat(x, b):
                    return Lam(x, NAT, build(b, moves + [("var", x)], env + [x]))
                case ExistsNat(x, b):
                    witness = App(Const(nat_name), code_term(moves, env))
                    sub = build(b, moves + [("var", x)], env + [x])
                    from .kernel import substitute as _subst
                    return Pair(witness, _subst(sub, x, witness))
                case Or(l, r):
                    flag = App(Const(bool_name), code_term(moves, env))
                    return Pair(flag, Pair(build(l, moves + [0], env),
                                           build(r, moves + [1], env)))
                case And(l, r):
                    return Pair(build(l, moves + [0], env),
                                build(r, moves + [1], env))
                case Atomic(_):
                    return App(Const(state_name), code_term(moves, env))
            raise GameError("implication inside a game formula")

        return OracleTerm(build(self.root, [], []), sig)


def learning_strategy_from_winning(omega: OmegaFn, root: Formula,
                                   sig: LearningSignature,
                                   assume_normalized: bool = False) -> CompletenessPipeline:
    """Package a recursive winning strategy as a state-indexed learning
    strategy (the pipeline object exposes the play-code transformer, the
    learning map, and the realizer assembly)."""
    return CompletenessPipeline(omega, root, sig, assume_normalized)


def strategy_to_realizer(pipeline: CompletenessPipeline) -> OracleTerm:
    return pipeline.to_realizer()


def eloise_from_realizer(t: OracleTerm, fuel: int = DEFAULT_FUEL) -> RealizerEloise:
    """The deterministic strategy read off a realizer of the game formula."""
    return RealizerEloise(t, fuel)

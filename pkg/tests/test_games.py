"""Backtracking Tarski games: engine, realizer strategies, completeness."""

import random

import pytest

from realizability.corpus import coquand_item, em1_item, minimum_item, staircase
from realizability.kernel import NAT, Const, FALSE, Proj, App, Var, eval_nat, numeral, typecheck
from realizability.logic import (
    And, Atomic, ExistsNat, ForallNat, Or, em1_formula, parse_formula,
    print_formula, subst_formula, realizer_type,
)
from realizability.games import (
    AtomicPosition, CompletenessPipeline, GameError, HandwrittenEM1Omega,
    IllegalMove, MoveBudgetExceeded, OmegaEloise, Play, PlayCode,
    RandomAbelard, RealizerEloise, ScriptedAbelard, SpoilerAbelard,
    decode_nat_list, encode_nat_list, eloise_owns, learning_strategy_from_winning,
    legal_moves, normalize_backtracking, run_1back, strategy_to_realizer,
)
from realizability.oracle import OracleTerm, WIChain, approximate, zero_loop
from realizability.realizer import em1_realizer, realizes_bounded
from realizability.states import (
    EMPTY, LearningSignature, PredicateSig, leq_state, state,
)
from realizability.syntax import parse_state


def em1_setup():
    item = em1_item()
    return item.sig, item.formula, item.realizer


# -- moves --------------------------------------------------------------------

def test_legal_moves_existential():
    sig, formula, _ = em1_setup()
    inner = subst_formula(formula.body, "x1", numeral(0))
    assert isinstance(inner, Or)
    ex = inner.left
    moves = legal_moves(ex, bound=2)
    assert [m for m, _ in moves] == [0, 1, 2]


def test_legal_moves_conjunction():
    sig = LearningSignature()
    f = parse_formula("(and (atom true) (atom false))", sig)
    assert [m for m, _ in legal_moves(f)] == ["left", "right"]


def test_legal_moves_atomic_raises():
    sig = LearningSignature()
    with pytest.raises(AtomicPosition):
        legal_moves(parse_formula("(atom true)", sig))


# -- play coding --------------------------------------------------------------

def test_nat_list_coding_round_trip():
    rng = random.Random(3)
    for _ in range(200):
        xs = [rng.randrange(50) for _ in range(rng.randrange(6))]
        assert decode_nat_list(encode_nat_list(xs)) == xs


def test_play_coding_round_trip():
    sig, formula, realizer = em1_setup()
    codec = PlayCode(formula)
    plays = [
        Play(formula),
        Play(formula, (2,)),
        Play(formula, (2, "right")),
        Play(formula, (2, "right", 3)),
        Play(formula, (2, "left", 3)),
    ]
    for p in plays:
        assert codec.decode_play(codec.encode_play(p)) == p
    code = codec.encode_bplay(plays)
    assert codec.decode_bplay(code) == plays


def test_play_decode_rejects_moves_past_atoms():
    sig, formula, _ = em1_setup()
    codec = PlayCode(formula)
    bad = encode_nat_list([2, 1, 3, 0])  # one move too many
    assert codec.decode_play(bad) is None


# -- the paper trace ----------------------------------------------------------

def test_em1_game_paper_trace():
    sig, formula, realizer = em1_setup()
    eloise = RealizerEloise(realizer)
    abelard = ScriptedAbelard([2, 3])
    out = run_1back(formula, eloise, abelard, sig)
    assert out.winner == "eloise"
    assert out.eloise_backtracks == 1
    assert out.final_state == state(("P", (2,), 3))
    script = [(r.player, r.kind) for r in out.records]
    assert script == [
        ("abelard", "move"),     # picks n = 2
        ("eloise", "move"),      # chi is False: universal side
        ("abelard", "move"),     # picks m = 3, the true instance
        ("eloise", "backtrack"),  # learns (P,2,3), retracts to the disjunction
        ("eloise", "move"),      # now chi is True: existential side
        ("eloise", "move"),      # plays the witness phi = 3 and wins
    ]
    # the backtrack returns to the disjunction with the learned atom
    bt = out.records[3]
    assert bt.backtrack_to == 2
    assert parse_state(bt.state) == state(("P", (2,), 3))
    # final position is the true atom P(2,3)
    final = out.records[-1]
    assert "P" in final.position and final.position.count("3")


def test_atomic_false_abelard_wins_immediately():
    sig = LearningSignature()
    f = parse_formula("(atom false)", sig)
    out = run_1back(f, RealizerEloise(OracleTerm(Const("cup"), sig)),
                    RandomAbelard(random.Random(0)), sig)
    assert out.winner == "abelard"
    assert out.records == []


def test_soundness_playouts_sample():
    sig, formula, realizer = em1_setup()
    rng = random.Random(7)
    for _ in range(50):
        out = run_1back(formula, RealizerEloise(realizer),
                        RandomAbelard(rng, bound=6), sig)
        assert out.winner == "eloise"


def test_minimum_game_backtrack_bound():
    for b in range(6):
        item = minimum_item({x: max(b - x, 0) for x in range(b + 1)})
        out = run_1back(item.formula, RealizerEloise(item.realizer),
                        SpoilerAbelard(scan=24), item.sig)
        assert out.winner == "eloise"
        assert out.eloise_backtracks <= b


def test_minimum_game_minima_strictly_decrease():
    b = 5
    item = minimum_item({x: max(b - x, 0) for x in range(b + 1)})
    out = run_1back(item.formula, RealizerEloise(item.realizer),
                    SpoilerAbelard(scan=24), item.sig)
    minima = [p.moves[0] for p in out.bplay if len(p.moves) == 1]
    deduped = [m for i, m in enumerate(minima) if i == 0 or minima[i - 1] != m]
    assert deduped == sorted(set(deduped), reverse=True)
    assert deduped[0] == b


def test_coquand_game_final_state_chain():
    table = staircase(3)
    item = coquand_item(table)
    out = run_1back(item.formula, RealizerEloise(item.realizer),
                    ScriptedAbelard([1]), item.sig, max_moves=1000)
    assert out.winner == "eloise"
    f = lambda x: table.get(x, 0)
    expected = state(*[("P", (f(j),), j + 1) for j in range(3)])
    assert out.final_state == expected


def test_preservation_lemma_probe():
    # along the generated play, the realizer associated to each prefix
    # realizes the end formula at the associated state
    sig, formula, realizer = em1_setup()
    eloise = RealizerEloise(realizer)
    out = run_1back(formula, eloise, ScriptedAbelard([2, 3]), sig)
    from realizability.games import GameView
    states = [EMPTY] + [parse_state(r.state) for r in out.records]
    for idx, play in enumerate(out.bplay):
        s = states[idx]
        view = GameView(formula, [play], s, sig)
        eloise._sync(view)
        rho = eloise._rho[-1]
        end = play.end
        verdict = realizes_bounded(OracleTerm(rho, sig), end, s, bound=5)
        assert not verdict.refuted


def test_illegal_backtrack_is_caught():
    sig, formula, realizer = em1_setup()

    class BadEloise(RealizerEloise):
        def act(self, view):
            if isinstance(view.play.end, Or):
                return ("backtrack", 1)  # target ends at an Abelard position
            return super().act(view)

    with pytest.raises(IllegalMove):
        run_1back(formula, BadEloise(realizer), ScriptedAbelard([2, 3]), sig)


# -- completeness -------------------------------------------------------------

def test_handwritten_omega_wins():
    sig, formula, _ = em1_setup()
    omega = HandwrittenEM1Omega(sig)
    rng = random.Random(11)
    for _ in range(30):
        out = run_1back(formula, OmegaEloise(omega),
                        RandomAbelard(rng, bound=5), sig)
        assert out.winner == "eloise"


def test_pipeline_mimics_first_pass_and_learns():
    sig, formula, _ = em1_setup()
    pipeline = learning_strategy_from_winning(
        HandwrittenEM1Omega(sig), formula, sig, assume_normalized=True)
    codec = pipeline.codec
    or_play = Play(formula, (2,))
    # at the empty state the strategy mimics omega's first pass: universal side
    assert pipeline.omega0_bool(EMPTY, codec.encode_play(or_play)) is False
    # after one lost play the learning component emits a nonempty state
    lost = Play(formula, (2, "right", 3))
    learned = pipeline.omega1(EMPTY, codec.encode_play(lost))
    assert learned
    # replaying at the enlarged state reproduces the post-backtrack choice
    from realizability.states import cup
    s1 = cup(EMPTY, learned)
    assert pipeline.omega0_bool(s1, codec.encode_play(or_play)) is True
    exists_play = Play(formula, (2, "left"))
    assert pipeline.omega0_nat(s1, codec.encode_play(exists_play)) == 3


def test_pipeline_learning_condition():
    # won complete plays yield the empty learning state
    sig, formula, _ = em1_setup()
    pipeline = learning_strategy_from_winning(
        HandwrittenEM1Omega(sig), formula, sig, assume_normalized=True)
    won_play = Play(formula, (2, "right", 0))  # notb(P(2,0)) is true
    assert pipeline.omega1(EMPTY, pipeline.codec.encode_play(won_play)) == EMPTY


def test_pipeline_psi_terminates_on_session_codes():
    sig, formula, _ = em1_setup()
    pipeline = learning_strategy_from_winning(
        HandwrittenEM1Omega(sig), formula, sig, assume_normalized=True)
    codec = pipeline.codec
    lost = Play(formula, (2, "right", 3))
    s = pipeline.omega1(EMPTY, codec.encode_play(lost))
    for play in (Play(formula), Play(formula, (2,)), lost):
        for st in (EMPTY, s):
            pipeline.psi(st, codec.encode_bplay([Play(formula), play]))


def test_strategy_to_realizer_em1():
    sig, formula, _ = em1_setup()
    pipeline = learning_strategy_from_winning(
        HandwrittenEM1Omega(sig), formula, sig, assume_normalized=True)
    t = strategy_to_realizer(pipeline)
    assert typecheck(t.term, {}, sig) == realizer_type(formula)
    assert realizes_bounded(t, formula, EMPTY, bound=5).realized
    assert realizes_bounded(t, formula, state(("P", (2,), 3)), bound=5).realized


def test_strategy_realizer_witness_stabilizes():
    # exists y P(y) with least true instance 2: the realizer's witness
    # stabilizes to 2 along its own learning chain
    sig = LearningSignature()
    sig.register_predicate(PredicateSig("Q", 0, fn=lambda y: y >= 2))
    root = ExistsNat("y", Atomic(App(Const("Q"), Var("y", NAT))))

    class TryInOrder:
        """Winning strategy: replay the next numeral after each loss."""

        def __init__(self):
            pass

        def __call__(self, bplay):
            current = bplay[-1]
            if isinstance(current.end, ExistsNat):
                tried = sum(1 for q in bplay[:-1] if len(q.moves) == 1)
                return current.extended(tried)
            return current.prefix(1)

    pipeline = learning_strategy_from_winning(TryInOrder(), root, sig,
                                              assume_normalized=True)
    t = strategy_to_realizer(pipeline)
    zr = zero_loop(OracleTerm(Proj(1, t.term), sig))
    chain = WIChain.from_trace(zr.trace)
    witness_term = OracleTerm(Proj(0, t.term), sig)
    values = [eval_nat(approximate(witness_term, chain(i)), sig)
              for i in range(len(zr.trace) + 2)]
    assert values[-1] == 2
    assert values[-2] == 2
    assert realizes_bounded(t, root, zr.zero_state, bound=5).realized


def test_normalize_backtracking_delays_to_atom():
    sig = LearningSignature()
    sig.register_predicate(PredicateSig("Q", 0, fn=lambda y: y == 1))
    y = Var("y", NAT)
    root = ExistsNat("y", Or(Atomic(App(Const("Q"), y)), Atomic(FALSE)))

    class EagerBacktracker:
        """Backtracks at the disjunction (not an atom) on the first try."""

        def __call__(self, bplay):
            current = bplay[-1]
            if isinstance(current.end, ExistsNat):
                tried = sum(1 for q in bplay[:-1] if len(q.moves) == 1)
                return current.extended(tried)
            if isinstance(current.end, Or):
                n = int(current.moves[0])
                if n != 1:
                    return current.prefix(1)  # early backtrack, not at an atom
                return current.extended("left")
            return current.prefix(1)

    inner = EagerBacktracker()
    norm = normalize_backtracking(inner, sig)
    bp = [Play(root), Play(root, (0,))]
    # the inner strategy wants to backtrack here; the normalized one plays a
    # dummy forward move instead
    assert norm(bp) == Play(root, (0, "left"))
    bp2 = bp + [Play(root, (0, "left"))]
    # in front of the (lost) atom the delayed backtrack fires
    assert norm(bp2) == Play(root)
    # after the fired backtrack the inner strategy moves on to the next try
    bp3 = bp2 + [Play(root)]
    assert norm(bp3) == Play(root, (1,))
    # and the normalized strategy still wins the engine game
    out = run_1back(root, OmegaEloise(norm), RandomAbelard(random.Random(1)),
                    sig)
    assert out.winner == "eloise"


def test_eloise_from_realizer_alias_and_flavor():
    from realizability.games import eloise_from_realizer
    sig, formula, realizer = em1_setup()
    strategy = eloise_from_realizer(realizer)
    assert strategy.flavor == "realizer-derived"
    out = run_1back(formula, strategy, ScriptedAbelard([1, 2]), sig)
    assert out.winner == "eloise"

import random

import pytest
from hypothesis import given, settings, strategies as st

from contrasim.csgame import (
    AttackerPos,
    SimPos,
    SwapPos,
    bounded_word_game_preorder,
    build_cs_game,
    cs_successors,
    decide_equivalence,
    decide_preorder,
    extract_contrasimulation,
    extract_distinguishing_formula,
    fc_membership,
    naive_single_step_preorder,
    strategy_from_fc,
)
from contrasim.game import Player, PlayOutcome, simulate_play, solve, validate_play
from contrasim.hml import DelayNor, hml_satisfies
from contrasim.lts import Lts, act
from contrasim.relations import contrasim_preorder, is_contrasimulation

from conftest import (
    make_random_lts,
    make_tau_free_lts,
    transcript_play,
    transcript_states,
    weak_enabled,
)

OP, A_EATS, B_EATS = act("op"), act("aEats"), act("bEats")


@st.composite
def random_lts_strategy(draw, max_states=5):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, max_states))
    return make_random_lts(random.Random(seed), n_states=n)


# -- move generation -----------------------------------------------------------


def test_attacker_successors_on_phil(phil):
    lts, pc, pp = phil
    (ab,) = lts.strong_successors(pc, OP)
    succs = cs_successors(lts, AttackerPos(pc, frozenset({pp})))
    assert SimPos(OP, ab, frozenset({pp})) in succs


def test_sim_answer_is_unique_and_advances_the_set(phil):
    lts, pc, pp = phil
    ab, q1, *_ = transcript_states(lts, pc, pp)
    succs = cs_successors(lts, SimPos(OP, ab, frozenset({pp})))
    assert succs == [AttackerPos(ab, q1)]
    assert len(q1) == 2


def test_swap_over_empty_set_is_stuck(phil):
    lts, _, _ = phil
    assert cs_successors(lts, SwapPos(0, frozenset())) == []


def test_sim_answer_may_be_empty(instable):
    lts, pab, pb = instable
    # challenge aEats against a set that cannot answer it
    succs = cs_successors(lts, SimPos(A_EATS, 0, frozenset({pb})))
    assert succs == [AttackerPos(0, frozenset())]


def test_attacker_positions_always_have_the_reflexive_swap(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    for idx, pos in enumerate(game.positions):
        if isinstance(pos, AttackerPos):
            assert game.graph.moves[idx]
            assert game.index[SwapPos(pos.p, pos.q_set)] in game.graph.moves[idx]


# -- game construction ------------------------------------------------------------


def test_trivial_one_state_game():
    lts = Lts(1, [])
    game = build_cs_game(lts, 0, 0)
    assert game.graph.position_count == 2
    assert set(game.positions) == {
        AttackerPos(0, frozenset({0})),
        SwapPos(0, frozenset({0})),
    }
    # the two positions form a cycle: reflexive swap, reflexive answer
    assert game.graph.moves[0] == (1,)
    assert game.graph.moves[1] == (0,)


def test_transcript_positions_present_and_playable(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    play = transcript_play(lts, pc, pp)
    indices = [game.index[pos] for pos in play]
    from contrasim.game import PositionalStrategy

    assert validate_play(game.graph, indices, PositionalStrategy(Player.DEFENDER, {}))


def test_transcript_consistent_with_a_winning_strategy(phil):
    """The solved defender strategy, overridden at the pivotal swap with the
    transcript's own commitment, validates the whole play."""
    from contrasim.game import PositionalStrategy

    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    solution = solve(game.graph)
    play = transcript_play(lts, pc, pp)
    indices = [game.index[pos] for pos in play]
    choice = dict(solution.defender_strategy.choice)
    for here, nxt in zip(indices, indices[1:]):
        if game.graph.owner[here] is Player.DEFENDER:
            assert solution.winner[nxt] is Player.DEFENDER  # still a winning move
            choice[here] = nxt
    adjusted = PositionalStrategy(Player.DEFENDER, choice)
    assert validate_play(game.graph, indices, adjusted)


def test_position_kinds_partition_ownership(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    for idx, pos in enumerate(game.positions):
        expected = Player.ATTACKER if isinstance(pos, AttackerPos) else Player.DEFENDER
        assert game.graph.owner[idx] is expected
        if isinstance(pos, SimPos):
            assert len(game.graph.moves[idx]) == 1


@given(random_lts_strategy())
@settings(max_examples=40, deadline=None)
def test_reachable_positions_within_exponential_bound(lts):
    n = lts.state_count
    bound = (len(lts.visible_actions) + 2) * n * 2**n
    game = build_cs_game(lts, 0, n - 1)
    assert game.graph.position_count <= bound


# -- deciding the preorder ----------------------------------------------------------


def test_phil_equivalence(phil):
    lts, pc, pp = phil
    assert decide_preorder(lts, pc, pp)
    assert decide_preorder(lts, pp, pc)
    assert decide_equivalence(lts, pc, pp)


def test_locked_fails_one_direction(locked):
    lts, pc, pl = locked
    assert not decide_preorder(lts, pc, pl)


def test_instable_not_equivalent(instable):
    lts, pab, pb = instable
    assert not decide_equivalence(lts, pab, pb)


def test_reflexivity(phil):
    lts, pc, _ = phil
    for s in (0, pc, lts.state_count - 1):
        assert decide_preorder(lts, s, s)


# -- certificates ----------------------------------------------------------------------


def test_extracted_relation_on_phil(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    solution = solve(game.graph)
    relation = extract_contrasimulation(game, solution)
    assert (pc, pp) in relation
    assert is_contrasimulation(lts, relation)


def test_extraction_on_deadlock_self_pair():
    lts = Lts(1, [])
    game = build_cs_game(lts, 0, 0)
    solution = solve(game.graph)
    assert extract_contrasimulation(game, solution) == {(0, 0)}


def test_extraction_refuses_attacker_won_instances(locked):
    lts, pc, pl = locked
    game = build_cs_game(lts, pc, pl)
    solution = solve(game.graph)
    with pytest.raises(ValueError):
        extract_contrasimulation(game, solution)


def test_formula_extraction_refuses_defender_won_instances(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    solution = solve(game.graph)
    with pytest.raises(ValueError):
        extract_distinguishing_formula(game, solution, game.graph.initial)


def test_formula_for_empty_defender_set_is_empty_nor():
    lts = Lts(2, [(0, act("a"), 1)])
    game = build_cs_game(lts, 0, 1)
    solution = solve(game.graph)
    pos = game.index[AttackerPos(1, frozenset())]
    assert solution.winner[pos] is Player.ATTACKER
    assert extract_distinguishing_formula(game, solution, pos) == DelayNor(())


def test_formula_separates_locked_example(locked):
    lts, pc, pl = locked
    game = build_cs_game(lts, pc, pl)
    solution = solve(game.graph)
    phi = extract_distinguishing_formula(game, solution, game.graph.initial)
    assert hml_satisfies(lts, pc, phi)
    assert not hml_satisfies(lts, pl, phi)


@given(random_lts_strategy())
@settings(max_examples=60, deadline=None)
def test_certificates_sound_on_random_instances(lts):
    """Defender wins yield relations the independent checker accepts;
    attacker wins yield formulas splitting initial state from set."""
    rng = random.Random(lts.state_count + len(lts.transitions))
    p = rng.randrange(lts.state_count)
    q = rng.randrange(lts.state_count)
    game = build_cs_game(lts, p, q)
    solution = solve(game.graph)
    if solution.winner[game.graph.initial] is Player.DEFENDER:
        relation = extract_contrasimulation(game, solution)
        assert (p, q) in relation
        assert is_contrasimulation(lts, relation)
    else:
        phi = extract_distinguishing_formula(game, solution, game.graph.initial)
        assert hml_satisfies(lts, p, phi)
        assert not hml_satisfies(lts, q, phi)


# -- agreement with the independent oracle --------------------------------------------


@given(random_lts_strategy(max_states=4))
@settings(max_examples=40, deadline=None)
def test_game_agrees_with_oracle(lts):
    oracle = contrasim_preorder(lts)
    for p in range(lts.state_count):
        for q in range(lts.state_count):
            assert decide_preorder(lts, p, q) == ((p, q) in oracle)


# -- the deliberately unsound single-step shortcut --------------------------------------


def test_naive_shortcut_misses_instable_choice(instable):
    lts, pab, pb = instable
    assert naive_single_step_preorder(lts, pab, pb)
    assert naive_single_step_preorder(lts, pb, pab)
    assert not decide_preorder(lts, pab, pb)
    assert not decide_preorder(lts, pb, pab)


def test_naive_shortcut_reflexive(instable):
    lts, pab, _ = instable
    assert naive_single_step_preorder(lts, pab, pab)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_naive_shortcut_exact_without_internal_steps(seed):
    lts = make_tau_free_lts(random.Random(seed), n_states=4)
    for p in range(lts.state_count):
        for q in range(lts.state_count):
            assert naive_single_step_preorder(lts, p, q) == decide_preorder(lts, p, q)


# -- the bounded word game ---------------------------------------------------------------


def test_bound_one_misses_bound_two_catches(instable):
    lts, pab, pb = instable
    assert bounded_word_game_preorder(lts, pab, pb, 1)
    assert not bounded_word_game_preorder(lts, pab, pb, 2)


def test_bounded_game_reflexive(instable):
    lts, pab, _ = instable
    for bound in (1, 2, 3):
        assert bounded_word_game_preorder(lts, pab, pab, bound)


def test_bound_must_be_positive(instable):
    lts, pab, pb = instable
    with pytest.raises(ValueError):
        bounded_word_game_preorder(lts, pab, pb, 0)


@pytest.mark.parametrize("fixture_name", ["phil", "locked", "instable"])
def test_bounded_game_exact_on_acyclic_fixtures(fixture_name, request):
    """With the bound at the state count, the word game agrees with the set
    game on every ordered pair of the (acyclic) example systems."""
    lts, left, right = request.getfixturevalue(fixture_name)
    bound = lts.state_count
    for p in range(lts.state_count):
        for q in range(lts.state_count):
            assert bounded_word_game_preorder(lts, p, q, bound) == decide_preorder(
                lts, p, q
            ), (p, q)


@given(random_lts_strategy(max_states=4))
@settings(max_examples=20, deadline=None)
def test_bounded_game_over_approximates(lts):
    """A shorter bound can only flip verdicts from false to true."""
    for p in range(lts.state_count):
        for q in range(lts.state_count):
            exact = decide_preorder(lts, p, q)
            if exact:
                assert bounded_word_game_preorder(lts, p, q, 2)


# -- defender strategies from the preorder ------------------------------------------------


def test_fc_membership_contains_the_relation(phil):
    lts, pc, pp = phil
    oracle = contrasim_preorder(lts)
    for p, q in sorted(oracle)[:10]:
        assert fc_membership(lts, oracle, p, frozenset({q}))


def test_fc_membership_after_one_challenge(phil):
    lts, pc, pp = phil
    ab, q1, *_ = transcript_states(lts, pc, pp)
    oracle = contrasim_preorder(lts)
    assert fc_membership(lts, oracle, ab, q1)


def test_fc_membership_false_off_the_word_successors():
    lts = Lts(3, [(0, act("a"), 1), (1, act("a"), 2)])
    relation = {(0, 0)}
    assert fc_membership(lts, relation, 0, frozenset({0}))
    assert fc_membership(lts, relation, 1, frozenset({1}))
    assert not fc_membership(lts, relation, 1, frozenset({0}))
    assert not fc_membership(lts, relation, 0, frozenset({1, 2}))
    assert not fc_membership(lts, relation, 2, frozenset({0, 1}))


def test_fc_strategy_defined_at_all_sim_positions(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    oracle = contrasim_preorder(lts)
    f = strategy_from_fc(lts, game, oracle)
    for idx, pos in enumerate(game.positions):
        if isinstance(pos, SimPos):
            assert f.move_from(idx) == game.graph.moves[idx][0]


def test_fc_strategy_makes_the_documented_swap_choice(phil):
    """At the pivotal swap the strategy commits to a state that can still
    answer the pending aEats observation."""
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    _, q1, ta_c, *_ = transcript_states(lts, pc, pp)
    oracle = contrasim_preorder(lts)
    f = strategy_from_fc(lts, game, oracle)
    swap_idx = game.index[SwapPos(ta_c, q1)]
    answer = game.positions[f.move_from(swap_idx)]
    assert isinstance(answer, AttackerPos)
    assert weak_enabled(lts, answer.p, A_EATS)
    assert not weak_enabled(lts, answer.p, B_EATS)
    # the solved winning strategy commits to the same side
    solution = solve(game.graph)
    solved_answer = game.positions[solution.defender_strategy.move_from(swap_idx)]
    assert weak_enabled(lts, solved_answer.p, A_EATS)
    assert not weak_enabled(lts, solved_answer.p, B_EATS)


def test_fc_strategy_survives_random_attackers(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    oracle = contrasim_preorder(lts)
    f = strategy_from_fc(lts, game, oracle)
    rng = random.Random(99)

    def random_attacker(graph, position):
        return rng.choice(graph.moves[position])

    for _ in range(1000):
        play, outcome = simulate_play(game.graph, f, random_attacker, 40)
        assert outcome in (PlayOutcome.ATTACKER_STUCK, PlayOutcome.STEP_BUDGET_REACHED)


def test_solved_strategy_survives_a_long_random_play(phil):
    lts, pc, pp = phil
    game = build_cs_game(lts, pc, pp)
    solution = solve(game.graph)
    rng = random.Random(7)

    def random_attacker(graph, position):
        return rng.choice(graph.moves[position])

    play, outcome = simulate_play(
        game.graph, solution.defender_strategy, random_attacker, 10_000
    )
    assert outcome in (PlayOutcome.ATTACKER_STUCK, PlayOutcome.STEP_BUDGET_REACHED)

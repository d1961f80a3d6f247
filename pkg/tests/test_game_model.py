import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcfr.game_model import (
    BehavioralProfile,
    GameBuilder,
    Perturbation,
    PolytopeGame,
    sequence_form,
)
from pcfr.games import build_kuhn, embed_matrix_game
from pcfr.metrics import expected_value
from pcfr.polytope_rm import NegativeBound, PerturbationTooLarge

from random_games import random_game


def single_decision_game(payoffs=(1.0, 0.0)):
    b = GameBuilder()
    terms = [b.terminal(u) for u in payoffs]
    root = b.decision(0, "only", tuple(f"a{i}" for i in range(len(payoffs))), terms)
    return b.build(root)


class TestBuilder:
    def test_bfs_order_parents_precede_children(self, kuhn):
        assert np.all(kuhn.parent[1:] < np.arange(1, kuhn.n_nodes))

    def test_every_nonroot_linked_exactly_once(self, kuhn):
        counts = np.zeros(kuhn.n_nodes, dtype=int)
        np.add.at(counts, kuhn.child_list, 1)
        assert counts[0] == 0
        assert np.all(counts[1:] == 1)

    def test_terminal_count_matches_kind(self, kuhn):
        assert len(kuhn.terminal_ids()) == 30  # 6 deals x 5 lines

    def test_double_link_rejected(self):
        b = GameBuilder()
        t = b.terminal(1.0)
        b.decision(0, "x", ("a", "b"), (t, t))
        with pytest.raises(ValueError, match="more than one parent"):
            b.build(1)

    def test_unreachable_node_rejected(self):
        b = GameBuilder()
        b.terminal(1.0)
        lone = b.terminal(2.0)
        with pytest.raises(ValueError, match="not reachable"):
            b.build(lone)


class TestValidate:
    def test_kuhn_is_valid(self, kuhn):
        report = kuhn.validate()
        assert report.ok and not report.errors

    def test_mismatched_action_counts_named(self):
        b = GameBuilder()
        n1 = b.decision(0, "shared", ("a", "b"), (b.terminal(0.0), b.terminal(1.0)))
        n2 = b.decision(0, "shared", ("a", "b", "c"),
                        (b.terminal(0.0), b.terminal(1.0), b.terminal(2.0)))
        root = b.chance((0.5, 0.5), (n1, n2))
        game = b.build(root)
        report = game.validate()
        assert not report.ok
        assert any("infoset 0" in e and "actions" in e for e in report.errors)

    def test_bad_chance_sum_named(self):
        b = GameBuilder()
        root = b.chance((0.5, 0.4), (b.terminal(0.0), b.terminal(1.0)))
        game = b.build(root)
        report = game.validate()
        assert not report.ok
        assert any("chance node 0" in e and "0.9" in e for e in report.errors)

    def test_imperfect_recall_detected(self):
        # Player 0 moves, then forgets which action was taken.
        b = GameBuilder()
        l1 = b.decision(0, "forgot", ("x", "y"), (b.terminal(0.0), b.terminal(1.0)))
        l2 = b.decision(0, "forgot", ("x", "y"), (b.terminal(2.0), b.terminal(3.0)))
        root = b.decision(0, "first", ("a", "b"), (l1, l2))
        game = b.build(root)
        report = game.validate()
        assert not report.ok
        assert any("perfect recall" in e for e in report.errors)


class TestUtilityRange:
    def test_kuhn(self, kuhn):
        assert kuhn.utility_range() == (-2.0, 2.0, 4.0)

    def test_matching_pennies_embedding(self):
        game = embed_matrix_game([[1.0, -1.0], [-1.0, 1.0]])
        assert game.utility_range() == (-1.0, 1.0, 2.0)


class TestSequenceForm:
    def test_single_decision_shape(self):
        sf = sequence_form(single_decision_game())
        assert sf.payoff.shape == (3, 1)  # empty sequence + 2 actions vs empty only
        np.testing.assert_allclose(sf.payoff[:, 0], [0.0, 1.0, 0.0])

    def test_matrix_embedding_roundtrip_exact(self):
        rng = np.random.default_rng(0)
        payoff = rng.integers(-5, 6, (3, 4)).astype(float)
        sf = sequence_form(embed_matrix_game(payoff))
        np.testing.assert_array_equal(sf.payoff[1:, 1:], payoff)
        np.testing.assert_array_equal(sf.payoff[0, :], 0.0)
        np.testing.assert_array_equal(sf.payoff[:, 0], 0.0)

    def test_kuhn_uniform_value_matches_tree_walk(self, kuhn):
        profile = BehavioralProfile.uniform(kuhn)
        sf = sequence_form(kuhn)
        assert sf.value(profile) == pytest.approx(expected_value(kuhn, profile), abs=1e-9)

    def test_sequence_cap(self, kuhn):
        with pytest.raises(ValueError, match="cap"):
            sequence_form(kuhn, max_sequences=5)

    def test_realization_plan_flow_conservation(self, kuhn):
        rng = np.random.default_rng(1)
        profile = BehavioralProfile.random(kuhn, rng)
        sf = sequence_form(kuhn)
        for p in (0, 1):
            plan = sf.realization_plan(profile, p)
            assert plan[0] == 1.0
            for k, iid in enumerate(kuhn.player_infosets[p]):
                I = kuhn.infosets[iid]
                kids = plan[1 + I.seq_start : 1 + I.seq_start + I.n_actions].sum()
                assert kids == pytest.approx(plan[sf.parent_seq[p][k]], abs=1e-12)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_tree_walk_matches_bilinear_value_on_random_profiles(seed):
    game = build_kuhn()
    profile = BehavioralProfile.random(game, np.random.default_rng(seed))
    sf = sequence_form(game)
    assert sf.value(profile) == pytest.approx(expected_value(game, profile), abs=1e-9)


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_random_games_are_valid_and_consistent(seed):
    game = random_game(seed)
    assert game.validate().ok
    profile = BehavioralProfile.random(game, np.random.default_rng(seed + 1))
    sf = sequence_form(game)
    assert sf.value(profile) == pytest.approx(expected_value(game, profile), abs=1e-9)


class TestProfiles:
    def test_uniform_distributions(self, kuhn):
        profile = BehavioralProfile.uniform(kuhn)
        assert profile.max_distribution_error() == 0.0

    def test_set_and_get_roundtrip(self, kuhn):
        profile = BehavioralProfile.uniform(kuhn)
        profile.set_infoset(3, [0.25, 0.75])
        np.testing.assert_array_equal(profile.infoset_probs(3), [0.25, 0.75])

    def test_wrong_length_rejected(self, kuhn):
        profile = BehavioralProfile.uniform(kuhn)
        with pytest.raises(ValueError):
            profile.set_infoset(0, [1.0])


class TestPerturbation:
    def test_uniform_bounds_and_tau(self, kuhn):
        pert = Perturbation.uniform(kuhn, 0.05)
        for I in kuhn.infosets:
            np.testing.assert_array_equal(pert.infoset_bounds(I.id), [0.05, 0.05])
            assert pert.infoset_tau(I.id) == pytest.approx(0.9)
            np.testing.assert_allclose(pert.uniform_point(I.id), [0.5, 0.5])

    def test_from_map(self, kuhn):
        pert = Perturbation.from_map(kuhn, {(0, 1): 0.2})
        np.testing.assert_array_equal(pert.infoset_bounds(0), [0.0, 0.2])
        assert pert.infoset_tau(0) == pytest.approx(0.8)

    def test_infeasible_rejected(self, kuhn):
        with pytest.raises(PerturbationTooLarge):
            Perturbation.uniform(kuhn, 0.5)
        with pytest.raises(NegativeBound):
            Perturbation.from_map(kuhn, {(0, 0): -0.1})

    def test_feasibility_slack(self, kuhn):
        pert = Perturbation.uniform(kuhn, 0.1)
        uniform = BehavioralProfile.uniform(kuhn)
        assert uniform.min_bound_slack(pert) == pytest.approx(0.4)


class TestPolytopeGame:
    def test_from_matrix_identity_bases(self):
        g = PolytopeGame.from_matrix([[1.0, -1.0], [-1.0, 1.0]])
        np.testing.assert_array_equal(g.basis_p1, np.eye(2))
        np.testing.assert_array_equal(g.basis_p2, np.eye(2))
        assert g.value([0.5, 0.5], [0.5, 0.5]) == 0.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            PolytopeGame.from_matrix(np.zeros((0, 2)))
        with pytest.raises(ValueError):
            PolytopeGame.from_matrix([[np.inf]])


class TestDump:
    def test_one_line_per_node_and_fields(self, kuhn):
        text = kuhn.dump()
        lines = text.strip().split("\n")
        assert len(lines) == kuhn.n_nodes
        assert lines[0].startswith("0\tparent=-1\tvia=-\tchance\tprobs=")
        assert any("\tdecision\t" in ln and "infoset=" in ln for ln in lines)
        assert any("\tterminal\tu=" in ln for ln in lines)

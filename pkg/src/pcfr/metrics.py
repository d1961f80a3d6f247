"""Exact evaluation of strategy profiles on two-player zero-sum game trees.

Best responses are computed by dynamic programming over the responder's
information sets in order of decreasing own-action depth: perfect recall
guarantees that every responder decision below an information set belongs to
a strictly deeper set, so a single deepest-first pass with memoized node
values is exact. The same machinery serves the restricted (lower-bounded)
strategy sets, where the best response places the mandatory mass on every
action and the free mass on an argmax action.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .game_model import (
    DECISION,
    TERMINAL,
    BehavioralProfile,
    ExtensiveFormGame,
    Perturbation,
)


def expected_value(game: ExtensiveFormGame, profile: BehavioralProfile) -> float:
    """Expected utility to player 0 under the profile (chance enumerated exactly)."""
    w = game.edge_weights(profile)
    leaf = np.where(game.kind == TERMINAL, game.terminal_utility, 0.0)
    return float(game.backward_values(w, leaf)[game.root])


def _profile_values(game: ExtensiveFormGame, profile: BehavioralProfile) -> np.ndarray:
    """Per-node expected utility to player 0, conditioned on reaching the node."""
    w = game.edge_weights(profile)
    leaf = np.where(game.kind == TERMINAL, game.terminal_utility, 0.0)
    return game.backward_values(w, leaf)


def external_reach(game: ExtensiveFormGame, profile: BehavioralProfile, player: int) -> np.ndarray:
    """Probability chance and the opponent contribute to reaching each node."""
    return game.forward_reach(game.external_edge_weights(profile, player))


@dataclass(frozen=True)
class BestResponse:
    """A responder strategy (flat, aligned with the game's sequence layout) and its value.

    ``value`` is in the responder's own perspective: no strategy in the
    feasible set achieves more against the fixed opponent.
    """

    player: int
    strategy: np.ndarray
    value: float


def best_response(
    game: ExtensiveFormGame,
    profile: BehavioralProfile,
    responder: int,
    bounds: Perturbation | None = None,
) -> BestResponse:
    """Exact best response for ``responder`` against the opponent's strategy.

    With ``bounds`` the response is restricted to the lower-bounded simplexes:
    each action keeps its mandatory mass and the free mass goes to an argmax
    action. Information sets the opponent and chance never reach are resolved
    by weighting their nodes uniformly, which pins down sensible play there
    without affecting the value.
    """
    sign = 1.0 if responder == 0 else -1.0
    w_ext = external_reach(game, profile, responder)
    opp_ext = np.append(profile.flat(1 - responder), 1.0)
    ext_edge = game.edge_chance * opp_ext[game.in_seq[1 - responder]]

    n_seq = game.n_sequences[responder]
    br = np.zeros(n_seq)
    in_seq_own = game.in_seq[responder]
    value = np.full(game.n_nodes, np.nan)
    kind = game.kind
    player_arr = game.player
    tu = game.terminal_utility

    limit = int(game.depth.max()) + 10
    if sys.getrecursionlimit() < limit + 100:
        sys.setrecursionlimit(limit + 100)

    def node_value(n: int) -> float:
        v = value[n]
        if not np.isnan(v):
            return v
        k = kind[n]
        if k == TERMINAL:
            v = sign * tu[n]
        elif k == DECISION and player_arr[n] == responder:
            v = 0.0
            for c in game.children(n):
                p = br[in_seq_own[c]]
                if p != 0.0:
                    v += p * node_value(c)
        else:
            v = 0.0
            for c in game.children(n):
                p = ext_edge[c]
                if p != 0.0:
                    v += p * node_value(c)
        value[n] = v
        return v

    ids = sorted(
        game.player_infosets[responder],
        key=lambda i: (-game.infosets[i].own_depth, i),
    )
    for iid in ids:
        I = game.infosets[iid]
        weights = w_ext[I.nodes]
        if weights.sum() <= 0.0:
            weights = np.full(len(I.nodes), 1.0 / len(I.nodes))
        q = np.zeros(I.n_actions)
        for h, wh in zip(I.nodes, weights):
            if wh == 0.0:
                continue
            for a, c in enumerate(game.children(int(h))):
                q[a] += wh * node_value(int(c))
        best = int(np.argmax(q))
        s = I.seq_start
        if bounds is None:
            br[s + best] = 1.0
        else:
            lb = bounds.infoset_bounds(iid)
            br[s : s + I.n_actions] = lb
            br[s + best] += 1.0 - lb.sum()

    # The memo holds values under the partial response; recompute for the final one.
    value[:] = np.nan
    total = node_value(game.root)
    return BestResponse(player=responder, strategy=br, value=float(total))


@dataclass(frozen=True)
class EvaluationReport:
    """Exact metrics of a profile: value, best responses, and per-infoset regret.

    ``exploitability`` is (br_value_p1 - value) + (br_value_p2 + value), the
    sum of both players' best-response gains; it is zero exactly at a Nash
    equilibrium. ``per_infoset`` maps infoset id to (external reach mass,
    conditional regret): how much the owner could gain from its best response
    below the infoset, conditioned on play reaching it.
    """

    value_p1: float
    br_value_p1: float
    br_value_p2: float
    exploitability: float
    max_infoset_regret: float
    max_regret_infoset: int
    per_infoset: dict[int, tuple[float, float]]


def _infoset_regrets(
    game: ExtensiveFormGame,
    profile: BehavioralProfile,
    responses: tuple[BestResponse, BestResponse],
) -> dict[int, tuple[float, float]]:
    values_cur = _profile_values(game, profile)
    out: dict[int, tuple[float, float]] = {}
    for player in (0, 1):
        sign = 1.0 if player == 0 else -1.0
        values_br = _profile_values(
            game, profile.with_player(player, responses[player].strategy)
        )
        w_ext = external_reach(game, profile, player)
        for iid in game.player_infosets[player]:
            I = game.infosets[iid]
            weights = w_ext[I.nodes]
            mass = float(weights.sum())
            if mass > 0.0:
                gap = float(weights @ (values_br[I.nodes] - values_cur[I.nodes])) * sign / mass
            else:
                # Unreached: compare under uniform node weighting, unnormalized.
                gap = float(np.mean(values_br[I.nodes] - values_cur[I.nodes])) * sign
            out[iid] = (mass, gap)
    return out


def exploitability(game: ExtensiveFormGame, profile: BehavioralProfile) -> EvaluationReport:
    """Full evaluation of a profile in the unrestricted game."""
    v = expected_value(game, profile)
    br1 = best_response(game, profile, 0)
    br2 = best_response(game, profile, 1)
    per_infoset = _infoset_regrets(game, profile, (br1, br2))
    worst_iid, (_, worst) = max(per_infoset.items(), key=lambda kv: kv[1][1])
    return EvaluationReport(
        value_p1=v,
        br_value_p1=br1.value,
        br_value_p2=br2.value,
        exploitability=(br1.value - v) + (br2.value + v),
        max_infoset_regret=worst,
        max_regret_infoset=worst_iid,
        per_infoset=per_infoset,
    )


def max_infoset_regret(game: ExtensiveFormGame, profile: BehavioralProfile) -> tuple[float, int]:
    """Maximum conditional regret over all information sets and where it occurs."""
    report = exploitability(game, profile)
    return report.max_infoset_regret, report.max_regret_infoset


def perturbed_game_regret(
    game: ExtensiveFormGame,
    profile: BehavioralProfile,
    perturbation: Perturbation,
) -> tuple[float, float]:
    """Best-response gains with both responses restricted to the perturbed sets.

    At zero perturbation this equals the exploitability components exactly
    (identical code path).
    """
    v = expected_value(game, profile)
    br1 = best_response(game, profile, 0, bounds=perturbation)
    br2 = best_response(game, profile, 1, bounds=perturbation)
    return br1.value - v, br2.value + v

"""Two-player zero-sum game trees and their strategy spaces.

Nodes live in a flat arena stored in breadth-first order, so every parent
index precedes its children and whole-tree sweeps run as single forward or
backward scans over plain arrays. Information sets partition each player's
decision nodes; per-player "sequences" enumerate the (infoset, action) pairs
and index the flat strategy arrays used throughout the package.

Utilities are stored at terminals as the payoff to player 0; player 1
receives the negation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np
from numba import njit

from .polytope_rm import NegativeBound, PerturbationTooLarge, basis_matrix

DECISION, CHANCE, TERMINAL = 0, 1, 2

_KIND_NAMES = {DECISION: "decision", CHANCE: "chance", TERMINAL: "terminal"}


@njit(cache=True)
def _forward_products(parent, w):
    """reach[i] = product of w along the path from the root to node i."""
    out = np.empty_like(w)
    out[0] = 1.0
    for i in range(1, w.shape[0]):
        out[i] = out[parent[i]] * w[i]
    return out


@njit(cache=True)
def _backward_values(parent, w, values):
    """Accumulate values up the tree: values[parent] += values[child] * w[child]."""
    for i in range(w.shape[0] - 1, 0, -1):
        values[parent[i]] += values[i] * w[i]


@dataclass(frozen=True)
class InfoSet:
    """One information set: the player's decision nodes it groups and their actions."""

    id: int
    player: int
    key: Hashable
    actions: tuple[str, ...]
    nodes: np.ndarray
    seq_start: int
    own_depth: int

    @property
    def n_actions(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    errors: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ExtensiveFormGame:
    """Immutable two-player zero-sum game tree with information sets.

    Arrays are indexed by node id (BFS order, root = 0). ``in_seq[p][n]`` is
    the flat sequence index of the edge entering n if its parent is a decision
    node of player p, else the sentinel ``n_sequences[p]``; gathering from a
    strategy array extended with a trailing 1.0 therefore yields per-edge
    probabilities in one shot. Instances are safe to share across threads.
    """

    kind: np.ndarray
    player: np.ndarray
    parent: np.ndarray
    depth: np.ndarray
    child_start: np.ndarray
    child_list: np.ndarray
    edge_chance: np.ndarray
    in_action: np.ndarray
    terminal_utility: np.ndarray
    infoset_id: np.ndarray
    node_actions: tuple[tuple[str, ...], ...]
    infosets: tuple[InfoSet, ...]
    player_infosets: tuple[tuple[int, ...], tuple[int, ...]]
    n_sequences: tuple[int, int]
    in_seq: tuple[np.ndarray, np.ndarray]

    @property
    def n_nodes(self) -> int:
        return self.kind.shape[0]

    @property
    def root(self) -> int:
        return 0

    def children(self, n: int) -> np.ndarray:
        return self.child_list[self.child_start[n] : self.child_start[n + 1]]

    def is_terminal(self, n: int) -> bool:
        return self.kind[n] == TERMINAL

    def terminal_ids(self) -> np.ndarray:
        return np.flatnonzero(self.kind == TERMINAL)

    def decision_ids(self, player: int) -> np.ndarray:
        return np.flatnonzero((self.kind == DECISION) & (self.player == player))

    def num_infosets(self, player: int) -> int:
        return len(self.player_infosets[player])

    def max_actions(self, player: int | None = None) -> int:
        if player is None:
            return max(self.max_actions(0), self.max_actions(1))
        ids = self.player_infosets[player]
        return max((self.infosets[i].n_actions for i in ids), default=0)

    def utility_range(self) -> tuple[float, float, float]:
        """(min, max, max - min) over terminal payoffs to player 0."""
        u = self.terminal_utility[self.kind == TERMINAL]
        lo, hi = float(u.min()), float(u.max())
        return lo, hi, hi - lo

    # -- traversal primitives ------------------------------------------------

    def forward_reach(self, edge_weights: np.ndarray) -> np.ndarray:
        return _forward_products(self.parent, edge_weights)

    def backward_values(self, edge_weights: np.ndarray, leaf_values: np.ndarray) -> np.ndarray:
        values = leaf_values.copy()
        _backward_values(self.parent, edge_weights, values)
        return values

    def edge_weights(self, profile: "BehavioralProfile") -> np.ndarray:
        """Per-node probability of its in-edge under chance and both strategies."""
        w = self.edge_chance.copy()
        for p in (0, 1):
            ext = np.append(profile.flat(p), 1.0)
            w *= ext[self.in_seq[p]]
        w[0] = 1.0
        return w

    def external_edge_weights(self, profile: "BehavioralProfile", player: int) -> np.ndarray:
        """In-edge probabilities contributed by chance and the opponent only."""
        opp = 1 - player
        ext = np.append(profile.flat(opp), 1.0)
        w = self.edge_chance * ext[self.in_seq[opp]]
        w[0] = 1.0
        return w

    def own_edge_weights(self, profile: "BehavioralProfile", player: int) -> np.ndarray:
        ext = np.append(profile.flat(player), 1.0)
        w = ext[self.in_seq[player]]
        w[0] = 1.0
        return w

    # -- diagnostics ---------------------------------------------------------

    def own_sequence(self, node: int, player: int) -> tuple[tuple[int, int], ...]:
        """(infoset, action) pairs of ``player`` on the path from the root to node."""
        seq = []
        n = node
        while n != 0:
            pa = self.parent[n]
            if self.kind[pa] == DECISION and self.player[pa] == player:
                seq.append((int(self.infoset_id[pa]), int(self.in_action[n])))
            n = pa
        return tuple(reversed(seq))

    def validate(self) -> ValidationReport:
        """Check the structural invariants; returns a report instead of raising.

        Covers: every non-root node has exactly one in-edge, chance
        distributions are non-negative and sum to 1 within 1e-12, all nodes of
        an information set carry the same ordered action list, terminal
        payoffs are finite, and both players have perfect recall.
        """
        errors: list[str] = []
        counts = np.zeros(self.n_nodes, dtype=np.int64)
        np.add.at(counts, self.child_list, 1)
        if counts[0] != 0:
            errors.append("root node 0 appears as a child")
        bad = np.flatnonzero(counts[1:] != 1) + 1
        for n in bad[:10]:
            errors.append(f"node {n} has {counts[n]} in-edges (expected 1)")

        for n in np.flatnonzero(self.kind == CHANCE):
            probs = self.edge_chance[self.children(n)]
            if np.any(probs < 0.0):
                errors.append(f"chance node {n} has a negative probability")
            total = float(probs.sum())
            if abs(total - 1.0) > 1e-12:
                errors.append(f"chance node {n}: probabilities sum to {total!r}")

        for z in self.terminal_ids():
            if not np.isfinite(self.terminal_utility[z]):
                errors.append(f"terminal node {z} has non-finite utility")

        for I in self.infosets:
            for n in I.nodes:
                if self.node_actions[n] != I.actions:
                    errors.append(
                        f"infoset {I.id} (key {I.key!r}): node {n} has actions "
                        f"{self.node_actions[n]} but the infoset has {I.actions}"
                    )
            ref = self.own_sequence(int(I.nodes[0]), I.player)
            for n in I.nodes[1:]:
                if self.own_sequence(int(n), I.player) != ref:
                    errors.append(
                        f"infoset {I.id} (key {I.key!r}): nodes {int(I.nodes[0])} and {int(n)} "
                        f"have different own histories (perfect recall violated)"
                    )
                    break
        return ValidationReport(ok=not errors, errors=tuple(errors))

    def dump(self) -> str:
        """One-line-per-node textual listing of the tree (see README for the format)."""
        lines = []
        for n in range(self.n_nodes):
            k = _KIND_NAMES[int(self.kind[n])]
            pa = int(self.parent[n])
            via = "-" if pa < 0 else self.node_actions[pa][int(self.in_action[n])]
            if self.kind[n] == TERMINAL:
                body = f"u={self.terminal_utility[n]:.12g}"
            elif self.kind[n] == CHANCE:
                probs = ",".join(
                    f"{self.node_actions[n][i]}:{self.edge_chance[c]:.12g}"
                    for i, c in enumerate(self.children(n))
                )
                body = f"probs={probs}"
            else:
                body = (
                    f"p{int(self.player[n])} infoset={int(self.infoset_id[n])} "
                    f"actions={','.join(self.node_actions[n])}"
                )
            lines.append(f"{n}\tparent={pa}\tvia={via}\t{k}\t{body}")
        return "\n".join(lines) + "\n"


class GameBuilder:
    """Assembles a game tree bottom-up; children must be created before parents.

    ``build(root)`` renumbers nodes breadth-first, groups decision nodes into
    information sets by (player, key), and freezes everything into arrays.
    """

    def __init__(self) -> None:
        self._kind: list[int] = []
        self._player: list[int] = []
        self._children: list[tuple[int, ...]] = []
        self._probs: list[tuple[float, ...] | None] = []
        self._utility: list[float] = []
        self._iskey: list[Hashable] = []
        self._actions: list[tuple[str, ...]] = []

    def _add(self, kind, player, children, probs, utility, iskey, actions) -> int:
        self._kind.append(kind)
        self._player.append(player)
        self._children.append(tuple(children))
        self._probs.append(probs)
        self._utility.append(utility)
        self._iskey.append(iskey)
        self._actions.append(tuple(actions))
        return len(self._kind) - 1

    def terminal(self, utility: float) -> int:
        return self._add(TERMINAL, -1, (), None, float(utility), None, ())

    def chance(self, probs: Sequence[float], children: Sequence[int], labels: Sequence[str] | None = None) -> int:
        if len(probs) != len(children):
            raise ValueError("chance node needs one probability per child")
        if labels is None:
            labels = [f"o{i}" for i in range(len(children))]
        return self._add(CHANCE, -1, children, tuple(float(p) for p in probs), 0.0, None, labels)

    def decision(self, player: int, infoset: Hashable, actions: Sequence[str], children: Sequence[int]) -> int:
        if player not in (0, 1):
            raise ValueError("player must be 0 or 1")
        if len(actions) != len(children):
            raise ValueError("decision node needs one action label per child")
        return self._add(DECISION, player, children, None, 0.0, infoset, actions)

    def build(self, root: int) -> ExtensiveFormGame:
        order = [root]
        new_id = {root: 0}
        for n in order:
            for c in self._children[n]:
                if c in new_id:
                    raise ValueError(f"node {c} is linked from more than one parent")
                new_id[c] = len(order)
                order.append(c)
        if len(order) != len(self._kind):
            raise ValueError(f"{len(self._kind) - len(order)} nodes are not reachable from the root")

        n_nodes = len(order)
        kind = np.empty(n_nodes, dtype=np.int8)
        player = np.full(n_nodes, -1, dtype=np.int8)
        parent = np.full(n_nodes, -1, dtype=np.int64)
        depth = np.zeros(n_nodes, dtype=np.int32)
        edge_chance = np.ones(n_nodes)
        in_action = np.full(n_nodes, -1, dtype=np.int16)
        terminal_utility = np.zeros(n_nodes)
        node_actions: list[tuple[str, ...]] = [()] * n_nodes
        child_start = np.zeros(n_nodes + 1, dtype=np.int64)
        child_list: list[int] = []
        # own_len[p][n]: number of player-p decisions strictly above node n
        own_len = [np.zeros(n_nodes, dtype=np.int32) for _ in (0, 1)]

        for new, old in enumerate(order):
            kind[new] = self._kind[old]
            player[new] = self._player[old]
            terminal_utility[new] = self._utility[old]
            node_actions[new] = self._actions[old]
            child_start[new] = len(child_list)
            for i, c in enumerate(self._children[old]):
                cn = new_id[c]
                child_list.append(cn)
                parent[cn] = new
                depth[cn] = depth[new] + 1
                in_action[cn] = i
                if self._kind[old] == CHANCE:
                    edge_chance[cn] = self._probs[old][i]
                for p in (0, 1):
                    own_len[p][cn] = own_len[p][new] + (
                        1 if (self._kind[old] == DECISION and self._player[old] == p) else 0
                    )
        child_start[n_nodes] = len(child_list)

        # Group decision nodes into information sets in BFS discovery order.
        groups: dict[tuple[int, Hashable], list[int]] = {}
        group_order: list[tuple[int, Hashable]] = []
        for n in range(n_nodes):
            if kind[n] != DECISION:
                continue
            gkey = (int(player[n]), self._iskey[order[n]])
            if gkey not in groups:
                groups[gkey] = []
                group_order.append(gkey)
            groups[gkey].append(n)

        infoset_id = np.full(n_nodes, -1, dtype=np.int64)
        infosets: list[InfoSet] = []
        player_infosets: tuple[list[int], list[int]] = ([], [])
        seq_counts = [0, 0]
        for gkey in group_order:
            p, key = gkey
            nodes = np.asarray(groups[gkey], dtype=np.int64)
            actions = node_actions[int(nodes[0])]
            iid = len(infosets)
            infosets.append(
                InfoSet(
                    id=iid,
                    player=p,
                    key=key,
                    actions=actions,
                    nodes=nodes,
                    seq_start=seq_counts[p],
                    own_depth=int(own_len[p][nodes[0]]),
                )
            )
            infoset_id[nodes] = iid
            player_infosets[p].append(iid)
            seq_counts[p] += len(actions)

        in_seq = []
        for p in (0, 1):
            arr = np.full(n_nodes, seq_counts[p], dtype=np.int64)
            for n in range(1, n_nodes):
                pa = parent[n]
                if kind[pa] == DECISION and player[pa] == p:
                    arr[n] = infosets[infoset_id[pa]].seq_start + in_action[n]
            in_seq.append(arr)

        for arr in (kind, player, parent, depth, edge_chance, in_action, terminal_utility, infoset_id):
            arr.setflags(write=False)
        child_list_arr = np.asarray(child_list, dtype=np.int64)
        child_list_arr.setflags(write=False)
        child_start.setflags(write=False)
        for arr in in_seq:
            arr.setflags(write=False)
        for I in infosets:
            I.nodes.setflags(write=False)

        return ExtensiveFormGame(
            kind=kind,
            player=player,
            parent=parent,
            depth=depth,
            child_start=child_start,
            child_list=child_list_arr,
            edge_chance=edge_chance,
            in_action=in_action,
            terminal_utility=terminal_utility,
            infoset_id=infoset_id,
            node_actions=tuple(node_actions),
            infosets=tuple(infosets),
            player_infosets=(tuple(player_infosets[0]), tuple(player_infosets[1])),
            n_sequences=(seq_counts[0], seq_counts[1]),
            in_seq=(in_seq[0], in_seq[1]),
        )


class BehavioralProfile:
    """A behavioral strategy for both players: one distribution per infoset.

    Stored as one flat float64 array per player, aligned with the game's
    sequence layout.
    """

    __slots__ = ("game", "_flat")

    def __init__(self, game: ExtensiveFormGame, flat: tuple[np.ndarray, np.ndarray]):
        self.game = game
        self._flat = (
            np.array(flat[0], dtype=np.float64, copy=True),
            np.array(flat[1], dtype=np.float64, copy=True),
        )
        for p in (0, 1):
            if self._flat[p].shape != (game.n_sequences[p],):
                raise ValueError("flat strategy length does not match the game's sequence count")

    @classmethod
    def uniform(cls, game: ExtensiveFormGame) -> "BehavioralProfile":
        flat = []
        for p in (0, 1):
            arr = np.zeros(game.n_sequences[p])
            for iid in game.player_infosets[p]:
                I = game.infosets[iid]
                arr[I.seq_start : I.seq_start + I.n_actions] = 1.0 / I.n_actions
            flat.append(arr)
        return cls(game, (flat[0], flat[1]))

    @classmethod
    def random(cls, game: ExtensiveFormGame, rng: np.random.Generator) -> "BehavioralProfile":
        flat = []
        for p in (0, 1):
            arr = np.zeros(game.n_sequences[p])
            for iid in game.player_infosets[p]:
                I = game.infosets[iid]
                arr[I.seq_start : I.seq_start + I.n_actions] = rng.dirichlet(np.ones(I.n_actions))
            flat.append(arr)
        return cls(game, (flat[0], flat[1]))

    def flat(self, player: int) -> np.ndarray:
        return self._flat[player]

    def infoset_probs(self, infoset_id: int) -> np.ndarray:
        I = self.game.infosets[infoset_id]
        return self._flat[I.player][I.seq_start : I.seq_start + I.n_actions].copy()

    def set_infoset(self, infoset_id: int, probs) -> None:
        I = self.game.infosets[infoset_id]
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (I.n_actions,):
            raise ValueError("wrong number of action probabilities")
        self._flat[I.player][I.seq_start : I.seq_start + I.n_actions] = probs

    def with_player(self, player: int, flat: np.ndarray) -> "BehavioralProfile":
        pair = (flat, self._flat[1]) if player == 0 else (self._flat[0], flat)
        return BehavioralProfile(self.game, pair)

    def copy(self) -> "BehavioralProfile":
        return BehavioralProfile(self.game, self._flat)

    def max_distribution_error(self) -> float:
        """Largest |sum of probabilities - 1| over all infosets."""
        worst = 0.0
        for I in self.game.infosets:
            s = float(self._flat[I.player][I.seq_start : I.seq_start + I.n_actions].sum())
            worst = max(worst, abs(s - 1.0))
        return worst

    def min_bound_slack(self, pert: "Perturbation") -> float:
        """min over (infoset, action) of sigma - lower bound; >= -1e-12 when feasible."""
        return min(
            float((self._flat[p] - pert.lower[p]).min()) if self.game.n_sequences[p] else 0.0
            for p in (0, 1)
        )


@dataclass(frozen=True)
class Perturbation:
    """Per-(infoset, action) lower bounds defining the restricted strategy sets."""

    game: ExtensiveFormGame
    lower: tuple[np.ndarray, np.ndarray]
    tau: tuple[np.ndarray, np.ndarray]

    @classmethod
    def _from_flat(cls, game: ExtensiveFormGame, flat: list[np.ndarray]) -> "Perturbation":
        taus = []
        for p in (0, 1):
            if np.any(flat[p] < 0.0):
                raise NegativeBound("perturbation lower bounds must be non-negative")
            tau = np.ones(len(game.player_infosets[p]))
            for k, iid in enumerate(game.player_infosets[p]):
                I = game.infosets[iid]
                total = float(flat[p][I.seq_start : I.seq_start + I.n_actions].sum())
                if total >= 1.0:
                    raise PerturbationTooLarge(
                        f"infoset {iid} (key {I.key!r}): lower bounds sum to {total} >= 1"
                    )
                tau[k] = 1.0 - total
            flat[p].setflags(write=False)
            tau.setflags(write=False)
            taus.append(tau)
        return cls(game=game, lower=(flat[0], flat[1]), tau=(taus[0], taus[1]))

    @classmethod
    def zero(cls, game: ExtensiveFormGame) -> "Perturbation":
        return cls._from_flat(game, [np.zeros(game.n_sequences[p]) for p in (0, 1)])

    @classmethod
    def uniform(cls, game: ExtensiveFormGame, xi: float) -> "Perturbation":
        return cls._from_flat(game, [np.full(game.n_sequences[p], float(xi)) for p in (0, 1)])

    @classmethod
    def from_map(cls, game: ExtensiveFormGame, mapping: Mapping[tuple[int, int], float]) -> "Perturbation":
        flat = [np.zeros(game.n_sequences[p]) for p in (0, 1)]
        for (iid, action), bound in mapping.items():
            I = game.infosets[iid]
            if not 0 <= action < I.n_actions:
                raise ValueError(f"infoset {iid} has no action index {action}")
            flat[I.player][I.seq_start + action] = float(bound)
        return cls._from_flat(game, flat)

    def infoset_bounds(self, infoset_id: int) -> np.ndarray:
        I = self.game.infosets[infoset_id]
        return self.lower[I.player][I.seq_start : I.seq_start + I.n_actions]

    def infoset_tau(self, infoset_id: int) -> float:
        I = self.game.infosets[infoset_id]
        return float(self.tau[I.player][self.game.player_infosets[I.player].index(infoset_id)])

    def uniform_point(self, infoset_id: int) -> np.ndarray:
        I = self.game.infosets[infoset_id]
        b = self.infoset_bounds(infoset_id)
        return b + (1.0 - b.sum()) / I.n_actions

    def basis(self, infoset_id: int):
        return basis_matrix(self.infoset_bounds(infoset_id))


@dataclass(frozen=True)
class PolytopeGame:
    """Zero-sum bilinear game whose strategy sets are hulls of explicit vertices.

    ``payoff`` is expressed in the ambient coordinates: the value of a profile
    is ``x' @ payoff @ y``. For a plain matrix game both bases are identity
    matrices and the vertices are the pure actions.
    """

    payoff: np.ndarray
    basis_p1: np.ndarray
    basis_p2: np.ndarray

    @classmethod
    def from_matrix(cls, payoff) -> "PolytopeGame":
        payoff = np.asarray(payoff, dtype=np.float64)
        if payoff.ndim != 2 or payoff.size == 0:
            raise ValueError("payoff must be a non-empty 2-d matrix")
        if not np.all(np.isfinite(payoff)):
            raise ValueError("payoff entries must be finite")
        n, m = payoff.shape
        return cls(payoff=payoff, basis_p1=np.eye(n), basis_p2=np.eye(m))

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoff.shape

    def value(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.asarray(x) @ self.payoff @ np.asarray(y))


# -- sequence form -----------------------------------------------------------


@dataclass(frozen=True)
class SequenceFormGame:
    """Sequence-form payoff matrix and constraint structure of a game tree.

    Sequence 0 is the empty sequence; game sequence s maps to index 1 + s.
    ``parent_seq[p][k]`` is the sequence index owning the k-th infoset of
    player p (0 when the player has not acted yet). The expected utility of
    any behavioral profile equals ``plan(p0)' @ payoff @ plan(p1)``.
    """

    game: ExtensiveFormGame
    payoff: np.ndarray
    parent_seq: tuple[np.ndarray, np.ndarray]

    def realization_plan(self, profile: BehavioralProfile, player: int) -> np.ndarray:
        plan = np.zeros(self.game.n_sequences[player] + 1)
        plan[0] = 1.0
        ids = sorted(
            self.game.player_infosets[player], key=lambda i: self.game.infosets[i].own_depth
        )
        flat = profile.flat(player)
        order = {iid: k for k, iid in enumerate(self.game.player_infosets[player])}
        for iid in ids:
            I = self.game.infosets[iid]
            base = plan[self.parent_seq[player][order[iid]]]
            s = I.seq_start
            plan[1 + s : 1 + s + I.n_actions] = base * flat[s : s + I.n_actions]
        return plan

    def value_of_plans(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(x @ self.payoff @ y)

    def value(self, profile: BehavioralProfile) -> float:
        return self.value_of_plans(
            self.realization_plan(profile, 0), self.realization_plan(profile, 1)
        )


def sequence_form(game: ExtensiveFormGame, max_sequences: int = 100_000) -> SequenceFormGame:
    """Convert a game tree to its sequence form (evaluation oracle for small games).

    Raises ValueError when either player's sequence count exceeds
    ``max_sequences``; the payoff matrix is dense.
    """
    for p in (0, 1):
        if game.n_sequences[p] + 1 > max_sequences:
            raise ValueError(
                f"player {p} has {game.n_sequences[p] + 1} sequences, over the cap {max_sequences}"
            )
    n1 = game.n_sequences[0] + 1
    n2 = game.n_sequences[1] + 1
    payoff = np.zeros((n1, n2))

    last_seq = [np.zeros(game.n_nodes, dtype=np.int64) for _ in (0, 1)]
    chance = np.ones(game.n_nodes)
    for n in range(1, game.n_nodes):
        pa = game.parent[n]
        chance[n] = chance[pa] * game.edge_chance[n]
        for p in (0, 1):
            s = game.in_seq[p][n]
            last_seq[p][n] = 1 + s if s < game.n_sequences[p] else last_seq[p][pa]
    for z in game.terminal_ids():
        payoff[last_seq[0][z], last_seq[1][z]] += chance[z] * game.terminal_utility[z]

    parent_seq = []
    for p in (0, 1):
        arr = np.zeros(len(game.player_infosets[p]), dtype=np.int64)
        for k, iid in enumerate(game.player_infosets[p]):
            node = int(game.infosets[iid].nodes[0])
            arr[k] = last_seq[p][node]
        arr.setflags(write=False)
        parent_seq.append(arr)
    payoff.setflags(write=False)
    return SequenceFormGame(game=game, payoff=payoff, parent_seq=(parent_seq[0], parent_seq[1]))

"""Perturbed counterfactual regret minimization (CFR+) on game trees.

Each information set runs the perturbed-simplex regret matcher+: the current
strategy is the mandatory lower-bound mass plus the free mass spread over
positive regrets, and the clamped regret update is driven by counterfactual
values weighted by the opponent-and-chance reach. Instantaneous regrets are
aggregated over an information set's nodes within a traversal and the clamp
is applied once per pass, which makes the update order-independent.

Two interchangeable traversal engines are provided: flat-array kernels that
sweep the breadth-first node arrays (default), and a recursive reference walk
(also used for chance sampling). They maintain identical state trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .game_model import (
    CHANCE,
    TERMINAL,
    BehavioralProfile,
    ExtensiveFormGame,
    Perturbation,
)
from .polytope_rm import basis_matrix, perturbed_action


def cfr_bound(gamma: float, infoset_count: int, max_actions: int, t: int) -> float:
    """Worst-case average regret of CFR+ in the restricted game after t iterations.

    gamma * |infosets| * sqrt(max actions) / sqrt(t).
    """
    return gamma * infoset_count * np.sqrt(max_actions) / np.sqrt(t)


@dataclass(frozen=True)
class CfrConfig:
    """Solver switches.

    averaging: "uniform" accumulates reach-weighted strategies as written;
    "linear" additionally weights iteration t by t. schedule: "alternating"
    updates player 1 with player 0's post-update strategy each iteration;
    "simultaneous" updates both against the iteration-start snapshot.
    chance: "enumerate" weights chance branches exactly; "sample" draws one
    branch per traversal (seeded). engine: "fast" uses the flat-array kernels,
    "reference" the recursive walk; both produce the same trajectories.
    """

    averaging: str = "uniform"
    schedule: str = "alternating"
    chance: str = "enumerate"
    seed: int | None = None
    engine: str = "fast"

    def __post_init__(self) -> None:
        if self.averaging not in ("uniform", "linear"):
            raise ValueError(f"unknown averaging mode {self.averaging!r}")
        if self.schedule not in ("alternating", "simultaneous"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.chance not in ("enumerate", "sample"):
            raise ValueError(f"unknown chance mode {self.chance!r}")
        if self.engine not in ("fast", "reference"):
            raise ValueError(f"unknown engine {self.engine!r}")


@dataclass(frozen=True)
class IterationRecord:
    t: int
    traversals: int
    value_p1: float
    value_p2: float


@njit(cache=True)
def _strategies_kernel(r, lower, tau, starts, out):
    for k in range(starts.shape[0] - 1):
        a, b = starts[k], starts[k + 1]
        lam = 0.0
        for s in range(a, b):
            if r[s] > 0.0:
                lam += r[s]
        if lam > 0.0:
            scale = tau[k] / lam
            for s in range(a, b):
                rp = r[s] if r[s] > 0.0 else 0.0
                out[s] = lower[s] + scale * rp
        else:
            u = tau[k] / (b - a)
            for s in range(a, b):
                out[s] = lower[s] + u


@njit(cache=True)
def _pass_kernel(parent, w_own, w_ext, value, in_seq_own, own_local, cfv, mass):
    """One counterfactual pass over the BFS arrays for the updating player.

    Forward scan: own reach (own strategy only) and external reach (opponent
    and chance). Backward scan: node values under the current profile, in the
    updating player's perspective. Then counterfactual action values are
    accumulated per sequence, weighted by the external reach of the decision
    node, and the own-reach mass per infoset for strategy averaging.
    """
    n = parent.shape[0]
    reach_own = np.empty(n)
    reach_ext = np.empty(n)
    reach_own[0] = 1.0
    reach_ext[0] = 1.0
    for i in range(1, n):
        pa = parent[i]
        reach_own[i] = reach_own[pa] * w_own[i]
        reach_ext[i] = reach_ext[pa] * w_ext[i]
    for i in range(n - 1, 0, -1):
        value[parent[i]] += value[i] * (w_own[i] * w_ext[i])
    for i in range(1, n):
        s = in_seq_own[i]
        if s >= 0:
            cfv[s] += reach_ext[parent[i]] * value[i]
    for i in range(n):
        k = own_local[i]
        if k >= 0:
            mass[k] += reach_own[i]
    return value[0]


@njit(cache=True)
def _update_kernel(cfv, mass, strat, lower, tau, starts, r, xavg, avg_weight):
    """Clamped perturbed regret update and strategy accumulation, per infoset.

    r <- [r + tau * (v - vbar) + (lower . (v - vbar)) * 1]+ with vbar = x . v;
    xavg <- xavg + mass * avg_weight * x.
    """
    for k in range(starts.shape[0] - 1):
        a, b = starts[k], starts[k + 1]
        vbar = 0.0
        for s in range(a, b):
            vbar += strat[s] * cfv[s]
        pdot = 0.0
        for s in range(a, b):
            pdot += lower[s] * (cfv[s] - vbar)
        tk = tau[k]
        w = mass[k] * avg_weight
        for s in range(a, b):
            rn = r[s] + tk * (cfv[s] - vbar) + pdot
            r[s] = rn if rn > 0.0 else 0.0
            xavg[s] += w * strat[s]


class CfrSolver:
    """Perturbed CFR+ over an immutable game tree.

    ``perturbation`` may be None (unperturbed), a float xi applied uniformly
    to every (infoset, action), or a ``Perturbation``. A solver owns its
    mutable per-infoset state and must not be advanced from two threads at
    once; distinct solvers over the same game may run concurrently.
    """

    def __init__(
        self,
        game: ExtensiveFormGame,
        perturbation: Perturbation | float | None = None,
        config: CfrConfig = CfrConfig(),
    ):
        self.game = game
        self.config = config
        if perturbation is None:
            perturbation = Perturbation.zero(game)
        elif isinstance(perturbation, (int, float)):
            perturbation = Perturbation.uniform(game, float(perturbation))
        self.perturbation = perturbation

        self.t = 0
        self.traversals = 0
        self._rng = np.random.default_rng(config.seed)

        self._starts = []
        self._own_local = []
        self._in_seq_kernel = []
        self._r = []
        self._xavg = []
        self._last_cfv: list[np.ndarray | None] = [None, None]
        self._last_strat: list[np.ndarray | None] = [None, None]
        for p in (0, 1):
            ids = game.player_infosets[p]
            starts = np.empty(len(ids) + 1, dtype=np.int64)
            for k, iid in enumerate(ids):
                starts[k] = game.infosets[iid].seq_start
            starts[len(ids)] = game.n_sequences[p]
            self._starts.append(starts)
            own_local = np.full(game.n_nodes, -1, dtype=np.int64)
            for k, iid in enumerate(ids):
                own_local[game.infosets[iid].nodes] = k
            self._own_local.append(own_local)
            self._in_seq_kernel.append(
                np.where(game.in_seq[p] == game.n_sequences[p], -1, game.in_seq[p])
            )
            self._r.append(np.zeros(game.n_sequences[p]))
            self._xavg.append(np.zeros(game.n_sequences[p]))

        base = np.where(game.kind == TERMINAL, game.terminal_utility, 0.0)
        self._leaf_signed = (base, -base)

    # -- per-infoset views ----------------------------------------------------

    def regrets(self, infoset_id: int) -> np.ndarray:
        I = self.game.infosets[infoset_id]
        return self._r[I.player][I.seq_start : I.seq_start + I.n_actions].copy()

    def cumulative_strategy(self, infoset_id: int) -> np.ndarray:
        I = self.game.infosets[infoset_id]
        return self._xavg[I.player][I.seq_start : I.seq_start + I.n_actions].copy()

    def regret_match_infoset(self, infoset_id: int) -> np.ndarray:
        """Current strategy of one infoset via the perturbed-simplex closed form."""
        return perturbed_action(
            self.regrets(infoset_id),
            basis_matrix(self.perturbation.infoset_bounds(infoset_id)),
        )

    def counterfactual_values(self, player: int) -> dict[int, tuple[np.ndarray, float]]:
        """Last pass's per-infoset action values and strategy value for ``player``."""
        cfv, strat = self._last_cfv[player], self._last_strat[player]
        if cfv is None:
            return {}
        out = {}
        for k, iid in enumerate(self.game.player_infosets[player]):
            a, b = self._starts[player][k], self._starts[player][k + 1]
            v = cfv[a:b].copy()
            out[iid] = (v, float(strat[a:b] @ v))
        return out

    def _build_strategies(self, player: int) -> np.ndarray:
        out = np.empty(self.game.n_sequences[player])
        _strategies_kernel(
            self._r[player],
            self.perturbation.lower[player],
            self.perturbation.tau[player],
            self._starts[player],
            out,
        )
        return out

    def current_profile(self) -> BehavioralProfile:
        return BehavioralProfile(self.game, (self._build_strategies(0), self._build_strategies(1)))

    def average_strategy(self) -> BehavioralProfile:
        """Normalized cumulative strategies; zero-mass infosets get the uniform point."""
        flats = []
        for p in (0, 1):
            out = np.empty(self.game.n_sequences[p])
            for k, iid in enumerate(self.game.player_infosets[p]):
                a, b = self._starts[p][k], self._starts[p][k + 1]
                chunk = self._xavg[p][a:b]
                total = chunk.sum()
                if total > 0.0:
                    out[a:b] = chunk / total
                else:
                    out[a:b] = self.perturbation.uniform_point(iid)
            flats.append(out)
        return BehavioralProfile(self.game, (flats[0], flats[1]))

    # -- traversal ------------------------------------------------------------

    def _avg_weight(self) -> float:
        return float(self.t + 1) if self.config.averaging == "linear" else 1.0

    def _apply_updates(self, player: int, cfv: np.ndarray, mass: np.ndarray, strat: np.ndarray) -> None:
        _update_kernel(
            cfv,
            mass,
            strat,
            self.perturbation.lower[player],
            self.perturbation.tau[player],
            self._starts[player],
            self._r[player],
            self._xavg[player],
            self._avg_weight(),
        )
        self._last_cfv[player] = cfv
        self._last_strat[player] = strat

    def _pass_fast(self, player: int, strat_own: np.ndarray, strat_opp: np.ndarray) -> float:
        game = self.game
        opp = 1 - player
        w_own = np.append(strat_own, 1.0)[game.in_seq[player]]
        w_ext = game.edge_chance * np.append(strat_opp, 1.0)[game.in_seq[opp]]
        value = self._leaf_signed[player].copy()
        cfv = np.zeros(game.n_sequences[player])
        mass = np.zeros(len(game.player_infosets[player]))
        v = _pass_kernel(
            game.parent,
            w_own,
            w_ext,
            value,
            self._in_seq_kernel[player],
            self._own_local[player],
            cfv,
            mass,
        )
        self._apply_updates(player, cfv, mass, strat_own)
        self.traversals += 1
        return float(v)

    def _pass_recursive(self, node: int, player: int, pi_own: float, pi_ext: float,
                        strats, cfv: np.ndarray, mass: np.ndarray) -> float:
        """Recursive counterfactual walk mirroring the kernels; own perspective.

        Accumulates external-reach-weighted action values and own-reach mass
        into the pass buffers; updates are applied by the caller.
        """
        game = self.game
        k = game.kind[node]
        if k == TERMINAL:
            u = float(game.terminal_utility[node])
            return u if player == 0 else -u
        if k == CHANCE:
            children = game.children(node)
            if self.config.chance == "sample":
                c = int(self._rng.choice(children, p=game.edge_chance[children]))
                return self._pass_recursive(c, player, pi_own, pi_ext, strats, cfv, mass)
            v = 0.0
            for c in children:
                pc = float(game.edge_chance[c])
                v += pc * self._pass_recursive(int(c), player, pi_own, pi_ext * pc, strats, cfv, mass)
            return v
        owner = int(game.player[node])
        I = game.infosets[int(game.infoset_id[node])]
        s = I.seq_start
        x = strats[owner][s : s + I.n_actions]
        children = game.children(node)
        if owner == player:
            vals = np.empty(I.n_actions)
            for a, c in enumerate(children):
                vals[a] = self._pass_recursive(int(c), player, pi_own * float(x[a]), pi_ext, strats, cfv, mass)
            vbar = float(x @ vals)
            cfv[s : s + I.n_actions] += pi_ext * vals
            mass[self._own_local[player][node]] += pi_own
            return vbar
        v = 0.0
        for a, c in enumerate(children):
            pa = float(x[a])
            v += pa * self._pass_recursive(int(c), player, pi_own, pi_ext * pa, strats, cfv, mass)
        return v

    def traverse(self, node: int, player: int, pi1: float, pi2: float) -> float:
        """One recursive update pass for ``player`` from ``node``.

        ``pi1`` and ``pi2`` are the players' reach probabilities into the
        node; with enumerated chance the chance reach folds into the
        non-updating player's factor. Regrets and cumulative strategies of
        every information set encountered are updated, with instantaneous
        regrets aggregated per infoset before the clamp. Returns the expected
        value of the subtree for player 0.
        """
        strats = (self._build_strategies(0), self._build_strategies(1))
        return self._traverse_with(node, player, pi1, pi2, strats)

    def _traverse_with(self, node, player, pi1, pi2, strats) -> float:
        cfv = np.zeros(self.game.n_sequences[player])
        mass = np.zeros(len(self.game.player_infosets[player]))
        pi_own = pi1 if player == 0 else pi2
        pi_ext = pi2 if player == 0 else pi1
        v = self._pass_recursive(node, player, float(pi_own), float(pi_ext), strats, cfv, mass)
        self._apply_updates(player, cfv, mass, strats[player])
        self.traversals += 1
        return v if player == 0 else -v

    def iterate(self) -> IterationRecord:
        """One iteration: an update pass for each player under the configured schedule."""
        fast = self.config.engine == "fast" and self.config.chance == "enumerate"
        if self.config.schedule == "alternating":
            if fast:
                v0 = self._pass_fast(0, self._build_strategies(0), self._build_strategies(1))
                v1 = -self._pass_fast(1, self._build_strategies(1), self._build_strategies(0))
            else:
                v0 = self._traverse_with(0, 0, 1.0, 1.0, (self._build_strategies(0), self._build_strategies(1)))
                v1 = self._traverse_with(0, 1, 1.0, 1.0, (self._build_strategies(0), self._build_strategies(1)))
        else:
            s0, s1 = self._build_strategies(0), self._build_strategies(1)
            if fast:
                v0 = self._pass_fast(0, s0, s1)
                v1 = -self._pass_fast(1, s1, s0)
            else:
                v0 = self._traverse_with(0, 0, 1.0, 1.0, (s0, s1))
                v1 = self._traverse_with(0, 1, 1.0, 1.0, (s0, s1))
        self.t += 1
        return IterationRecord(t=self.t, traversals=self.traversals, value_p1=float(v0), value_p2=float(v1))

    def run(self, iterations: int) -> IterationRecord:
        rec = None
        for _ in range(iterations):
            rec = self.iterate()
        if rec is None:
            raise ValueError("iterations must be >= 1")
        return rec

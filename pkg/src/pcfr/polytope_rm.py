"""Regret matching+ over finitely generated convex polytopes.

The matcher keeps one clamped cumulative-regret entry per polytope vertex and
plays the convex combination of vertices weighted by positive regret mass.
For a simplex restricted by per-action lower bounds the vertex set has a
closed form (one vertex per action), which admits an O(n) update written in
terms of regrets against pure actions only; both the generic and the closed
form are provided and agree step for step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NegativeBound(ValueError):
    """Some per-action lower bound is negative."""


class PerturbationTooLarge(ValueError):
    """Per-action lower bounds sum to 1 or more, leaving no free mass."""


@dataclass(frozen=True)
class PerturbationBasis:
    """Vertex description of a simplex constrained by per-action lower bounds.

    The feasible set ``{x in simplex : x_i >= lower_i}`` is the convex hull of
    the n vertices ``lower + tau * e_i`` where ``tau = 1 - sum(lower)``.
    Stacked as columns these form an invertible matrix whose columns each sum
    to one.
    """

    lower: np.ndarray
    tau: float

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Vertex matrix; column j is ``lower + tau * e_j``."""
        return np.tile(self.lower[:, None], (1, self.n)) + self.tau * np.eye(self.n)

    def uniform_point(self) -> np.ndarray:
        """Barycenter of the vertices: the default action when no regret is positive."""
        return self.lower + self.tau / self.n

    def vertex_regrets(self, phi_pure: np.ndarray) -> np.ndarray:
        """Map instantaneous regrets against pure actions to regrets against vertices.

        Because every vertex is ``lower + tau * e_i`` and the utility is affine
        in the action, the regret against vertex i is
        ``tau * phi_i + lower . phi``.
        """
        phi_pure = np.asarray(phi_pure, dtype=np.float64)
        return self.tau * phi_pure + float(self.lower @ phi_pure)


def basis_matrix(lower) -> PerturbationBasis:
    """Build the perturbed-simplex vertex basis for the given lower bounds.

    Raises NegativeBound if any bound is negative and PerturbationTooLarge if
    the bounds sum to 1 or more.
    """
    lower = np.asarray(lower, dtype=np.float64).copy()
    if lower.ndim != 1 or lower.shape[0] < 1:
        raise ValueError("lower bounds must form a non-empty vector")
    if np.any(lower < 0.0):
        raise NegativeBound(f"negative lower bound in {lower!r}")
    total = float(lower.sum())
    if total >= 1.0:
        raise PerturbationTooLarge(f"lower bounds sum to {total} >= 1")
    lower.setflags(write=False)
    return PerturbationBasis(lower=lower, tau=1.0 - total)


def positive_part(v: np.ndarray) -> np.ndarray:
    return np.maximum(v, 0.0)


def matched_action(regrets: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Action played by regret matching+ over the columns of ``basis``.

    With positive regret mass the action is the regret-weighted convex
    combination of vertices; otherwise the uniform combination.
    """
    rp = positive_part(np.asarray(regrets, dtype=np.float64))
    lam = rp.sum()
    n = basis.shape[1]
    if lam <= 0.0:
        weights = np.full(n, 1.0 / n)
    else:
        weights = rp / lam
    return basis @ weights


def perturbed_action(regrets: np.ndarray, pb: PerturbationBasis) -> np.ndarray:
    """Closed form of ``matched_action`` for perturbed-simplex bases.

    Equals ``lower + tau * [r]+ / sum([r]+)``, i.e. the mandatory mass plus
    the free mass spread proportionally to positive regret.
    """
    rp = positive_part(np.asarray(regrets, dtype=np.float64))
    lam = rp.sum()
    if lam <= 0.0:
        return pb.uniform_point()
    return pb.lower + (pb.tau / lam) * rp


def perturbed_regret_update(regrets: np.ndarray, pb: PerturbationBasis, phi_pure) -> np.ndarray:
    """One clamped cumulative-regret update from pure-action regrets.

    ``r <- [r + tau * phi + (lower . phi) * 1]+``, which equals feeding the
    generic matcher the regrets against the basis vertices.
    """
    return positive_part(regrets + pb.vertex_regrets(phi_pure))


def regret_bound(gamma: float, n_vertices: int, t: int) -> float:
    """Worst-case average external regret of RM+ after t steps: gamma*sqrt(n)/sqrt(t)."""
    return gamma * np.sqrt(n_vertices) / np.sqrt(t)


def measured_regret(phis) -> float:
    """Maximum signed average regret against the vertex set for a played history.

    ``phis`` is the sequence of per-step instantaneous regret vectors against
    the vertices. No clamping is applied; the result can be negative.
    """
    arr = np.asarray(phis, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("need a non-empty T x n history of regret vectors")
    return float(arr.sum(axis=0).max() / arr.shape[0])


class RegretMatcherPlus:
    """Stateful regret matcher over the columns of an explicit vertex basis.

    ``step()`` returns the next action; ``observe(phi)`` consumes the
    instantaneous regrets against each vertex for the step just played and
    updates the clamped cumulative regrets and the running average action.
    With ``clamp=False`` the cumulative regrets are left unclamped (plain
    regret matching). ``linear_averaging`` weights the average by step index.
    """

    def __init__(self, basis: np.ndarray, *, clamp: bool = True, linear_averaging: bool = False):
        basis = np.asarray(basis, dtype=np.float64)
        if basis.ndim != 2 or basis.shape[1] < 1:
            raise ValueError("basis must be an (ambient x n_vertices) matrix")
        self.basis = basis
        self.clamp = clamp
        self.linear_averaging = linear_averaging
        n = basis.shape[1]
        self.regrets = np.zeros(n)
        self.cumulative_signed = np.zeros(n)
        self.average = np.zeros(basis.shape[0])
        self.t = 0
        self._weight_total = 0.0
        self._pending: np.ndarray | None = None

    def step(self) -> np.ndarray:
        x = matched_action(self.regrets, self.basis)
        self._pending = x
        return x

    def observe(self, phi: np.ndarray) -> None:
        if self._pending is None:
            raise RuntimeError("observe() called before step()")
        phi = np.asarray(phi, dtype=np.float64)
        if phi.shape != self.regrets.shape:
            raise ValueError(f"expected {self.regrets.shape[0]} vertex regrets, got {phi.shape}")
        self.cumulative_signed += phi
        updated = self.regrets + phi
        self.regrets = positive_part(updated) if self.clamp else updated
        self.t += 1
        w = float(self.t) if self.linear_averaging else 1.0
        self._weight_total += w
        self.average += (w / self._weight_total) * (self._pending - self.average)
        self._pending = None

    def measured_regret(self) -> float:
        return float(self.cumulative_signed.max() / max(self.t, 1))


class PerturbedRegretMatcherPlus:
    """O(n) regret matcher+ for a lower-bounded simplex.

    Behaves exactly like ``RegretMatcherPlus`` over the perturbation basis but
    consumes regrets against pure actions in the unrestricted game, converting
    them on the fly.
    """

    def __init__(self, pb: PerturbationBasis, *, clamp: bool = True, linear_averaging: bool = False):
        self.pb = pb
        self.clamp = clamp
        self.linear_averaging = linear_averaging
        self.regrets = np.zeros(pb.n)
        self.cumulative_signed = np.zeros(pb.n)
        self.average = np.zeros(pb.n)
        self.t = 0
        self._weight_total = 0.0
        self._pending: np.ndarray | None = None

    def step(self) -> np.ndarray:
        x = perturbed_action(self.regrets, self.pb)
        self._pending = x
        return x

    def observe(self, phi_pure: np.ndarray) -> None:
        if self._pending is None:
            raise RuntimeError("observe() called before step()")
        phi_pure = np.asarray(phi_pure, dtype=np.float64)
        if phi_pure.shape != self.regrets.shape:
            raise ValueError(f"expected {self.regrets.shape[0]} pure-action regrets, got {phi_pure.shape}")
        vphi = self.pb.vertex_regrets(phi_pure)
        self.cumulative_signed += vphi
        updated = self.regrets + vphi
        self.regrets = positive_part(updated) if self.clamp else updated
        self.t += 1
        w = float(self.t) if self.linear_averaging else 1.0
        self._weight_total += w
        self.average += (w / self._weight_total) * (self._pending - self.average)
        self._pending = None

    def measured_regret(self) -> float:
        return float(self.cumulative_signed.max() / max(self.t, 1))


@dataclass(frozen=True)
class SelfPlayRecord:
    t: int
    regret_p1: float
    regret_p2: float
    bound_p1: float
    bound_p2: float
    exploitability: float


@dataclass
class SelfPlayResult:
    records: list[SelfPlayRecord] = field(default_factory=list)
    average_p1: np.ndarray | None = None
    average_p2: np.ndarray | None = None


def matrix_exploitability(payoff: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    """Sum of both players' best-response gains against (x, y) over the full simplexes."""
    return float((payoff @ y).max() - (x @ payoff).min())


def self_play(
    payoff: np.ndarray,
    steps: int,
    checkpoints=(),
    *,
    lower_p1=None,
    lower_p2=None,
    clamp: bool = True,
    linear_averaging: bool = False,
) -> SelfPlayResult:
    """Run regret-matching self-play on a zero-sum payoff matrix.

    Row player maximizes x' U y, column player minimizes it. Optional lower
    bounds restrict each player's simplex; regrets are then measured against
    the restricted set's vertices. Records at each checkpoint hold the signed
    maximum average regrets, the worst-case bounds for the matched sets, and
    the full-game exploitability of the average profile.
    """
    payoff = np.asarray(payoff, dtype=np.float64)
    n, m = payoff.shape
    gamma = float(payoff.max() - payoff.min())

    def make(side_n, lower):
        if lower is None:
            return RegretMatcherPlus(np.eye(side_n), clamp=clamp, linear_averaging=linear_averaging)
        return PerturbedRegretMatcherPlus(basis_matrix(lower), clamp=clamp, linear_averaging=linear_averaging)

    m1 = make(n, lower_p1)
    m2 = make(m, lower_p2)
    marks = set(checkpoints)
    result = SelfPlayResult()
    for t in range(1, steps + 1):
        x = m1.step()
        y = m2.step()
        u = float(x @ payoff @ y)
        m1.observe(payoff @ y - u)       # pure-action regrets for the row player
        m2.observe(u - x @ payoff)       # column player receives -u
        if t in marks or t == steps:
            result.records.append(
                SelfPlayRecord(
                    t=t,
                    regret_p1=m1.measured_regret(),
                    regret_p2=m2.measured_regret(),
                    bound_p1=regret_bound(gamma, n, t),
                    bound_p2=regret_bound(gamma, m, t),
                    exploitability=matrix_exploitability(payoff, m1.average, m2.average),
                )
            )
    result.average_p1 = m1.average
    result.average_p2 = m2.average
    return result

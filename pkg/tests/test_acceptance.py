"""Acceptance suite: each criterion runs at its stated tolerance and prints
one PASS/FAIL line (visible with ``pytest -s`` or on failure).

Expensive runs are shared through session fixtures: one matrix self-play pair
(T = 2^16), one Leduc-3 sweep over the five perturbation levels plus the
unperturbed run (T = 2^14 each), and two bound runs.
"""

import time

import numpy as np
import pytest

from pcfr.cfr import CfrSolver, cfr_bound
from pcfr.cli import ExperimentConfig, main, run_experiment
from pcfr.game_model import BehavioralProfile
from pcfr.metrics import best_response, exploitability
from pcfr.polytope_rm import (
    PerturbedRegretMatcherPlus,
    RegretMatcherPlus,
    basis_matrix,
    self_play,
)

from random_games import enumerate_best_response_value, random_game
from reference_cfr import ReferenceCfrPlus

T_MATRIX = 2**16
T_EFG = 2**14
XIS = (0.1, 0.05, 0.01, 0.005, 0.001)


def report(number: int, name: str, ok: bool, details: str = "") -> None:
    print(f"ACCEPTANCE {number:>2} {name}: {'PASS' if ok else 'FAIL'} {details}")
    assert ok, f"criterion {number} ({name}) failed: {details}"


@pytest.fixture(scope="session")
def matrix_runs():
    checkpoints = [2**i for i in range(17)]
    games = {
        "matching_pennies": np.array([[1.0, -1.0], [-1.0, 1.0]]),
        "random_10x10": np.random.default_rng(2024).uniform(-1.0, 1.0, (10, 10)),
    }
    out = {}
    started = time.perf_counter()
    for name, payoff in games.items():
        out[name] = (payoff, self_play(payoff, T_MATRIX, checkpoints))
    return out, time.perf_counter() - started


@pytest.fixture(scope="session")
def leduc_runs(leduc3):
    """{xi: (ExperimentResult, min current-strategy slack over checkpoints)}."""
    out = {}
    for xi in XIS + (0.0,):
        slack = []
        hook = lambda t, solver, rec: slack.append(
            solver.current_profile().min_bound_slack(solver.perturbation)
        )
        result = run_experiment(
            ExperimentConfig(game="leduc3", xi=xi, iterations=T_EFG),
            checkpoint_hook=hook,
            game=leduc3,
        )
        out[xi] = (result, min(slack))
    return out


@pytest.fixture(scope="session")
def kuhn_bound_run(kuhn):
    started = time.perf_counter()
    result = run_experiment(
        ExperimentConfig(game="kuhn", xi=0.05, iterations=T_EFG), game=kuhn
    )
    return result, time.perf_counter() - started


def test_criterion_01_polytope_regret_bound(matrix_runs):
    runs, elapsed = matrix_runs
    worst_margin = np.inf
    for payoff, result in runs.values():
        for rec in result.records:
            worst_margin = min(
                worst_margin, rec.bound_p1 - rec.regret_p1, rec.bound_p2 - rec.regret_p2
            )
    ok = worst_margin >= 0.0 and elapsed < 10.0
    report(1, "rm+ polytope bound", ok, f"worst margin {worst_margin:.3e}, {elapsed:.1f}s")


def test_criterion_02_average_profile_nash_link(matrix_runs):
    runs, _ = matrix_runs
    worst = -np.inf
    for payoff, result in runs.values():
        for rec in result.records:
            worst = max(worst, rec.exploitability - (rec.regret_p1 + rec.regret_p2))
    report(2, "exploitability <= regret sum", worst <= 1e-9, f"worst excess {worst:.3e}")


def test_criterion_03_perturbed_update_equivalence():
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(2, 11):
        lower = rng.uniform(0.0, 1.0, n)
        lower *= rng.uniform(0.05, 0.95) / lower.sum()
        pb = basis_matrix(lower)
        fast = PerturbedRegretMatcherPlus(pb)
        generic = RegretMatcherPlus(pb.matrix)
        for _ in range(1000):
            xf, xg = fast.step(), generic.step()
            phi = rng.uniform(-1.0, 1.0, n)
            fast.observe(phi)
            generic.observe(pb.matrix.T @ phi)
            worst = max(
                worst,
                float(np.abs(xf - xg).max()),
                float(np.abs(fast.regrets - generic.regrets).max()),
            )
    report(3, "efficient update equals generic path", worst < 1e-12, f"max divergence {worst:.3e}")


def test_criterion_04_perturbation_feasibility(leduc_runs):
    worst = np.inf
    for xi in XIS:
        _, min_slack = leduc_runs[xi]
        worst = min(worst, min_slack)
    report(4, "emitted strategies respect lower bounds", worst >= -1e-12,
           f"min slack {worst:.3e}")


def test_criterion_05_cfr_bound_in_perturbed_game(kuhn, leduc3, kuhn_bound_run, leduc_runs):
    kuhn_result, kuhn_elapsed = kuhn_bound_run
    gamma_k = kuhn.utility_range()[2]
    margin = np.inf
    for rec in kuhn_result.records:
        for player in (0, 1):
            bound = cfr_bound(gamma_k, kuhn.num_infosets(player), kuhn.max_actions(player), rec.t)
            eps = rec.eps1_perturbed if player == 0 else rec.eps2_perturbed
            margin = min(margin, bound - eps)
    leduc_result, _ = leduc_runs[0.01]
    gamma_l = leduc3.utility_range()[2]
    leduc_elapsed = leduc_result.records[-1].seconds
    for rec in leduc_result.records:
        for player in (0, 1):
            bound = cfr_bound(gamma_l, leduc3.num_infosets(player), leduc3.max_actions(player), rec.t)
            eps = rec.eps1_perturbed if player == 0 else rec.eps2_perturbed
            margin = min(margin, bound - eps)
    ok = margin >= 0.0 and kuhn_elapsed < 5.0 and leduc_elapsed < 600.0
    report(5, "perturbed-game regret within cfr bound", ok,
           f"worst margin {margin:.3e}, kuhn {kuhn_elapsed:.1f}s, leduc {leduc_elapsed:.1f}s")


def test_criterion_06_kuhn_convergence(kuhn):
    solver = CfrSolver(kuhn)
    for _ in range(T_EFG):
        solver.iterate()
    rep = exploitability(kuhn, solver.average_strategy())
    ok = rep.exploitability < 1e-3 and abs(rep.value_p1 - (-1.0 / 18.0)) < 1e-3
    report(6, "kuhn exploitability and value", ok,
           f"expl {rep.exploitability:.2e}, value {rep.value_p1:.6f}")


def test_criterion_07_refinement_effect(leduc_runs):
    perturbed = leduc_runs[0.01][0].records[-1]
    unperturbed = leduc_runs[0.0][0].records[-1]
    assert perturbed.traversals == unperturbed.traversals
    ratio = perturbed.max_infoset_regret / unperturbed.max_infoset_regret
    report(7, "perturbed run 10x more refined", ratio <= 0.1,
           f"max infoset regret ratio {ratio:.4f}")


def test_criterion_08_floor_ordering(leduc_runs):
    finals = {xi: leduc_runs[xi][0].records[-1] for xi in XIS}
    expl = {xi: finals[xi].exploitability for xi in XIS}
    ordered = expl[0.01] <= expl[0.05] <= expl[0.1]
    argmin_xi = min(XIS, key=lambda xi: finals[xi].max_infoset_regret)
    ok = ordered and argmin_xi in (0.005, 0.01)
    report(8, "exploitability floors ordered, sweet spot in the middle", ok,
           f"expl {[f'{expl[x]:.3g}' for x in (0.1, 0.05, 0.01)]}, argmin xi {argmin_xi}")


def test_criterion_09_zero_perturbation_degeneracy(kuhn):
    solver = CfrSolver(kuhn, 0.0)
    ref = ReferenceCfrPlus(kuhn)
    worst = 0.0
    for _ in range(100):
        solver.iterate()
        ref.iterate()
        profile = solver.current_profile()
        for I in kuhn.infosets:
            worst = max(worst, float(np.abs(profile.infoset_probs(I.id) - ref.strategy(I.id)).max()))
    report(9, "xi=0 matches plain cfr+ step for step", worst <= 1e-12,
           f"max strategy divergence {worst:.3e}")


def test_criterion_10_best_response_vs_enumeration():
    worst = 0.0
    for seed in range(20):
        game = random_game(seed, max_nodes=50)
        profile = BehavioralProfile.random(game, np.random.default_rng(10_000 + seed))
        for responder in (0, 1):
            dp = best_response(game, profile, responder).value
            brute = enumerate_best_response_value(game, profile, responder)
            worst = max(worst, abs(dp - brute))
    report(10, "dp best response equals brute force", worst <= 1e-12, f"max gap {worst:.3e}")


def test_criterion_11_determinism(tmp_path):
    csvs = []
    for run in (0, 1):
        out = tmp_path / f"run{run}.csv"
        code = main(["solve", "--game", "kuhn", "--xi", "0.01",
                     "--iterations", "64", "--out", str(out)])
        assert code == 0
        rows = out.read_text().strip().split("\n")
        csvs.append("\n".join(",".join(r.split(",")[:-1]) for r in rows))
    report(11, "identical configs give identical metric columns", csvs[0] == csvs[1])

"""Experiment runner: perturbation sweeps with checkpointed convergence metrics.

``solve`` runs perturbed CFR+ on one game and perturbation level, evaluating
the average profile at power-of-two checkpoints and writing one CSV row per
checkpoint. ``sweep`` repeats a run over a list of perturbation levels and
prints a comparison table. Metric columns are deterministic for identical
configurations (and seeds, in sampling mode); only the wall-clock column
varies between runs.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

from .cfr import CfrConfig, CfrSolver, cfr_bound
from .game_model import ExtensiveFormGame, Perturbation
from .games import build_game
from .metrics import exploitability, perturbed_game_regret
from .polytope_rm import PerturbationTooLarge

CSV_HEADER = "t,traversals,exploitability,perturbed_regret,max_infoset_regret,bound,seconds"


@dataclass(frozen=True)
class ExperimentConfig:
    game: str
    xi: float = 0.0
    iterations: int = 2**14
    averaging: str = "uniform"
    schedule: str = "alternating"
    chance: str = "enumerate"
    seed: int | None = None
    out: Path | None = None

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.xi < 0.0:
            raise ValueError("xi must be non-negative")


@dataclass(frozen=True)
class ConvergenceRecord:
    """Metrics of the average profile at one checkpoint.

    ``perturbed_regret`` is the sum of both players' best-response gains with
    responses restricted to the perturbed sets (eps1 + eps2); ``bound`` is the
    worst-case CFR+ guarantee at this iteration for the larger player.
    """

    t: int
    traversals: int
    exploitability: float
    perturbed_regret: float
    max_infoset_regret: float
    bound: float
    seconds: float
    eps1_perturbed: float
    eps2_perturbed: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    game: ExtensiveFormGame
    solver: CfrSolver
    records: list[ConvergenceRecord] = field(default_factory=list)


def default_checkpoints(t_max: int) -> tuple[int, ...]:
    """Powers of two up to t_max, plus t_max itself."""
    marks = []
    c = 1
    while c <= t_max:
        marks.append(c)
        c *= 2
    if marks[-1] != t_max:
        marks.append(t_max)
    return tuple(marks)


def check_feasible(game: ExtensiveFormGame, xi: float) -> None:
    """Reject uniform perturbations that leave some infoset no free mass."""
    max_a = game.max_actions()
    if xi * max_a >= 1.0:
        raise PerturbationTooLarge(
            f"xi={xi} is infeasible: an infoset with {max_a} actions would need "
            f"total mandatory mass {xi * max_a} >= 1"
        )


def run_experiment(config: ExperimentConfig, checkpoint_hook=None,
                   game: ExtensiveFormGame | None = None) -> ExperimentResult:
    """Run one solver to ``config.iterations``, recording metrics at checkpoints.

    ``checkpoint_hook(t, solver, record)`` is called after each checkpoint
    evaluation; pass a prebuilt ``game`` to skip tree construction.
    """
    if game is None:
        game = build_game(config.game)
    check_feasible(game, config.xi)
    pert = Perturbation.uniform(game, config.xi)
    solver = CfrSolver(
        game,
        pert,
        CfrConfig(
            averaging=config.averaging,
            schedule=config.schedule,
            chance=config.chance,
            seed=config.seed,
        ),
    )
    _, _, gamma = game.utility_range()
    infosets = max(game.num_infosets(0), game.num_infosets(1))
    max_a = game.max_actions()
    marks = set(default_checkpoints(config.iterations))

    result = ExperimentResult(config=config, game=game, solver=solver)
    started = time.perf_counter()
    for _ in range(config.iterations):
        rec = solver.iterate()
        if rec.t in marks:
            profile = solver.average_strategy()
            report = exploitability(game, profile)
            eps1, eps2 = perturbed_game_regret(game, profile, pert)
            record = ConvergenceRecord(
                t=rec.t,
                traversals=rec.traversals,
                exploitability=report.exploitability,
                perturbed_regret=eps1 + eps2,
                max_infoset_regret=report.max_infoset_regret,
                bound=cfr_bound(gamma, infosets, max_a, rec.t),
                seconds=time.perf_counter() - started,
                eps1_perturbed=eps1,
                eps2_perturbed=eps2,
            )
            result.records.append(record)
            if checkpoint_hook is not None:
                checkpoint_hook(rec.t, solver, record)
    return result


def format_csv(records) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.t},{r.traversals},{r.exploitability:.12g},{r.perturbed_regret:.12g},"
            f"{r.max_infoset_regret:.12g},{r.bound:.12g},{r.seconds:.6f}"
        )
    return "\n".join(lines) + "\n"


def write_csv(records, path: Path) -> None:
    Path(path).write_text(format_csv(records))


def _dedupe_xis(xis) -> list[float]:
    seen = []
    for x in xis:
        if x in seen:
            print(f"warning: duplicate xi value {x} ignored", file=sys.stderr)
        else:
            seen.append(x)
    return seen


def sweep_experiments(base: ExperimentConfig, xis, out_dir: Path | None = None,
                      game: ExtensiveFormGame | None = None):
    """Run one experiment per perturbation level; returns ({xi: result}, {xi: error}).

    Runs are independent; failures are collected rather than aborting the
    sweep, so partial results are preserved.
    """
    if game is None:
        game = build_game(base.game)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    stem = base.game.replace(":", "_").replace("/", "_")
    results: dict[float, ExperimentResult] = {}
    errors: dict[float, Exception] = {}
    for xi in _dedupe_xis(xis):
        cfg = replace(base, xi=xi, out=None)
        try:
            res = run_experiment(cfg, game=game)
        except Exception as e:  # noqa: BLE001 - aggregate per-run failures
            errors[xi] = e
            continue
        results[xi] = res
        if out_dir is not None:
            write_csv(res.records, out_dir / f"{stem}_xi{xi:g}.csv")
    return results, errors


def comparison_table(results: dict[float, "ExperimentResult"]) -> str:
    lines = [f"{'xi':>10}  {'final_exploitability':>22}  {'final_max_infoset_regret':>26}"]
    for xi in sorted(results):
        recs = results[xi].records
        if not recs:
            continue
        final = recs[-1]
        lines.append(f"{xi:>10g}  {final.exploitability:>22.12g}  {final.max_infoset_regret:>26.12g}")
    return "\n".join(lines)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--game", required=True, help="kuhn | leduc3 | leduc5 | leduc:k=<K> | matrix:<path>")
    p.add_argument("--iterations", type=int, default=2**14)
    p.add_argument("--averaging", choices=("uniform", "linear"), default="uniform")
    p.add_argument("--schedule", choices=("alternating", "simultaneous"), default="alternating")
    p.add_argument("--chance", choices=("enumerate", "sample"), default="enumerate")
    p.add_argument("--seed", type=int, default=0, help="chance-sampling seed (sampling mode only)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="pcfr", description="Perturbed CFR+ experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)

    solve_p = sub.add_parser("solve", help="run one game at one perturbation level")
    _add_common(solve_p)
    solve_p.add_argument("--xi", type=float, default=0.0, help="uniform per-action lower bound")
    solve_p.add_argument("--out", type=Path, required=True, help="CSV output path")

    sweep_p = sub.add_parser("sweep", help="run one game over a list of perturbation levels")
    _add_common(sweep_p)
    sweep_p.add_argument("--xi-list", type=str, required=True,
                         help="comma-separated perturbation levels, e.g. 0.1,0.05,0.01")
    sweep_p.add_argument("--out", type=Path, default=None, help="directory for per-xi CSVs")

    args = parser.parse_args(argv)

    try:
        if args.command == "solve":
            config = ExperimentConfig(
                game=args.game, xi=args.xi, iterations=args.iterations,
                averaging=args.averaging, schedule=args.schedule, chance=args.chance,
                seed=args.seed, out=args.out,
            )
            result = run_experiment(config)
            try:
                write_csv(result.records, args.out)
            except OSError as e:
                print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
                return 1
            final = result.records[-1]
            print(
                f"{args.game} xi={args.xi:g} t={final.t} traversals={final.traversals} "
                f"exploitability={final.exploitability:.6g} "
                f"perturbed_regret={final.perturbed_regret:.6g} "
                f"max_infoset_regret={final.max_infoset_regret:.6g}"
            )
            print(f"wrote {args.out}")
            return 0

        xis = [float(tok) for tok in args.xi_list.split(",") if tok.strip() != ""]
        base = ExperimentConfig(
            game=args.game, iterations=args.iterations, averaging=args.averaging,
            schedule=args.schedule, chance=args.chance, seed=args.seed,
        )
        results, errors = sweep_experiments(base, xis, out_dir=args.out)
        print(comparison_table(results))
        for xi, err in errors.items():
            print(f"error: xi={xi:g}: {err}", file=sys.stderr)
        return 1 if errors else 0
    except (ValueError, PerturbationTooLarge, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

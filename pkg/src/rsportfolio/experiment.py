"""Train-then-evaluate pipeline comparing the standard seed policies."""

from __future__ import annotations

from .evaluation import (
    EvalConfig, EvalMatrix, ReportRow, build_eval_matrix, evaluate_vs_baseline, evaluate_vs_exploiter,
)
from .portfolio import SeedPolicy, SolverConfig, best_seed, solve_nash, sparsify
from .prng import SplitMix64
from .player import McConfig
from .seedmatrix import MatchupConfig, ResultMatrix

DEFAULT_ALPHAS = (0.5, 0.75, 1.0)

# the desk-scale experiment: 5x5, K=50 training seeds, 50 playouts per move,
# 100 held-out opponents, 1000 exploiter repetitions
DESK_MATCHUP = MatchupConfig(board_size=5, mc=McConfig(playouts_per_move=50), K=50, base_seed=1)
DESK_EVAL = EvalConfig(heldout_count=100, kprime_list=(1, 2, 4, 8, 16), repetitions=1000)


def standard_policies(
    matrix: ResultMatrix,
    alphas=DEFAULT_ALPHAS,
    tie_break_seed: int = 0,
    solver: SolverConfig = SolverConfig(),
) -> dict[str, SeedPolicy]:
    """The randomized baseline (uniform over the training seeds), BestSeed, Nash and SparseNash."""
    idx = range(matrix.K)
    eq = solve_nash(matrix, solver)
    out = {
        "baseline": SeedPolicy.uniform(idx),
        "bestseed": SeedPolicy.from_best_seed(best_seed(matrix, tie_break_seed)),
        "nash": SeedPolicy.from_strategies("nash", 0.0, eq.x, eq.y),
    }
    for a in alphas:
        out[f"sparsenash@{a:g}"] = SeedPolicy.from_strategies("sparsenash", a, sparsify(eq.x, a), sparsify(eq.y, a))
    return out


def evaluate_policies(
    policies: dict[str, SeedPolicy],
    em: EvalMatrix,
    config: EvalConfig,
    board: int,
    K: int,
) -> list[ReportRow]:
    """One row per (policy, K'); K'=1 is the baseline criterion.

    Every policy sees the same opponent draws for a given K' (a fresh
    generator seeded with ``eval_seed`` each time).
    """
    rows = []
    for name, pol in policies.items():
        method = name.split("@")[0]
        for kp in config.kprime_list:
            if kp == 1:
                rep = evaluate_vs_baseline(pol, em)
            else:
                rep = evaluate_vs_exploiter(pol, em, kp, config.repetitions, SplitMix64(config.eval_seed ^ kp))
            rows.append(ReportRow.from_report(method, board, K, pol.alpha, kp, rep))
    return rows


def run_comparison(
    matrix: ResultMatrix,
    matchup: MatchupConfig,
    config: EvalConfig,
    journal=None,
    workers: int = 1,
    alphas=DEFAULT_ALPHAS,
) -> tuple[dict[str, SeedPolicy], EvalMatrix, list[ReportRow]]:
    if matrix.fingerprint != matchup.fingerprint():
        raise ValueError("matrix was built under a different matchup configuration")
    policies = standard_policies(matrix, alphas)
    rows_needed = range(matrix.K)
    em = build_eval_matrix(rows_needed, rows_needed, config, matchup, journal, workers)
    return policies, em, evaluate_policies(policies, em, config, matchup.board_size, matrix.K)

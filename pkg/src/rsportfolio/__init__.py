"""Random-seed portfolios for a randomized Phantom Go player.

A seeded Monte Carlo player is a deterministic policy; playing seeds against
each other gives a binary win matrix from which BestSeed, Nash and SparseNash
seed distributions are computed and then evaluated on held-out seeds.
"""

from .evaluation import (
    EvalConfig, EvalMatrix, WinRateReport, build_eval_matrix, evaluate_vs_baseline, evaluate_vs_exploiter,
    expected_vs_exploiter, summarize,
)
from .go import Board, Color, area_score, apply_move, is_eyelike
from .player import McConfig, choose_move, playout
from .portfolio import (
    NashEquilibrium, SeedPolicy, SolverConfig, best_seed, exploitability, solve_nash, sparse_nash, sparsify,
)
from .prng import SplitMix64
from .referee import Referee
from .seedmatrix import MatchupConfig, ResultMatrix, build_matrix, play_seeded_game

__version__ = "0.1.0"

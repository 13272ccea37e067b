"""
The desk-scale experiment
=========================

Train on a 50 x 50 seed matrix (5x5 board, 50 playouts per move), then
evaluate the baseline, BestSeed, Nash and SparseNash policies against 100
held-out opponent seeds. Everything lands in ``artifacts/desk5x5``:

* ``train.journal`` / ``eval.journal``: one line per game, resumable
* ``train.matrix``: the learning matrix in the normative text format
* ``*.policy``: the policy files
* ``report.csv`` / ``report.md``: the results table

On one core this takes about two and a half hours; interrupt it whenever
you like, a rerun picks up from the journals. ``--jobs`` spreads the games
over processes.
"""

import argparse
import logging
import time
from pathlib import Path

from rsportfolio.evaluation import binomial_interval, expected_vs_exploiter, summarize, to_csv
from rsportfolio.experiment import DESK_EVAL, DESK_MATCHUP, run_comparison
from rsportfolio.portfolio import best_seed, solve_nash, write_policy
from rsportfolio.seedmatrix import build_matrix, default_workers, write_matrix

parser = argparse.ArgumentParser(description=__doc__.split("\n")[2])
parser.add_argument("--out", default=Path(__file__).resolve().parents[1] / "artifacts" / "desk5x5", type=Path)
parser.add_argument("--jobs", type=int, default=default_workers())
args = parser.parse_args()
logging.basicConfig(level=logging.INFO, format="%(message)s")

cfg, ecfg = DESK_MATCHUP, DESK_EVAL
args.out.mkdir(parents=True, exist_ok=True)
t0 = time.time()


def progress(n, total):
    if n % 250 == 0 or n == total:
        print(f"  {n}/{total} games, {time.time() - t0:.0f}s", flush=True)


# %%
# Step 1: the learning matrix. M[i, j] = 1 when Black seed i beats White seed j.
m = build_matrix(cfg, args.out / "train.journal", args.jobs, progress)
write_matrix(args.out / "train.matrix", m)
print(f"training matrix: K={m.K}, Black wins {m.entries.mean():.3f} of games")

# %%
# Step 2: the equilibrium of the matrix game. Its value is what Black can
# guarantee against any mix of the training White seeds.
eq = solve_nash(m)
print(f"Nash value {eq.value:.4f}, duality gap {eq.duality_gap:.1e}, "
      f"support {(eq.x > 0).sum()} black / {(eq.y > 0).sum()} white seeds")

# %%
# Step 3: play every training seed against the held-out opponents, in both
# colours, and score each policy. Games already in the journal are reused.
policies, em, rows = run_comparison(m, cfg, ecfg, args.out / "eval.journal", args.jobs)
for name, pol in policies.items():
    write_policy(args.out / f"{name.replace('@', '_a')}.policy", pol)

(args.out / "report.csv").write_text(to_csv(rows))
table = summarize(rows)
(args.out / "report.md").write_text(table + "\n")
print(table)

# %%
# BestSeed against the randomized player, as a plain binomial count.
bs = best_seed(m)
wins = int(em.black[bs.black_index].sum() + em.white[bs.white_index].sum())
games = 2 * len(em.opponents)
lo, hi = binomial_interval(wins, games)
print(f"BestSeed (B{bs.black_index}, W{bs.white_index}) won {wins}/{games}, 95% CI [{lo:.3f}, {hi:.3f}]")
for name in ("baseline", "bestseed", "nash"):
    print(f"  exact K'=8 exploiter value, {name}: {expected_vs_exploiter(policies[name], em, 8):.3f}")

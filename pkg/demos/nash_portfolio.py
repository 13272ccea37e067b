"""
BestSeed, Nash and SparseNash on a small matrix
===============================================

The seed matrix is a constant-sum game: Black picks a row (a seed), White a
column, Black scores M[i, j]. BestSeed picks the single best row, which a
clever opponent can exploit; the Nash mixture cannot be exploited below the
game value.
"""

import numpy as np

from rsportfolio.oracle import support_enumeration
from rsportfolio.portfolio import best_seed, exploitability, solve_nash, sparsify

gen = np.random.default_rng(4)
M = (gen.random((8, 8)) < 0.55).astype(float)
print(M.astype(int))

bs = best_seed(M)
eq = solve_nash(M)
print(f"BestSeed: black row {bs.black_index}, white column {bs.white_index}")
print(f"Nash value {eq.value:.4f} (oracle {support_enumeration(M)[2]:.4f}), gap {eq.duality_gap:.1e}")
print("x =", np.round(eq.x, 3))

# %%
# The worst column against each Black strategy: pure BestSeed versus the mixture.
pure = np.eye(8)[bs.black_index]
print(f"worst case for BestSeed row: {(pure @ M).min():.2f}; for Nash x: {(eq.x @ M).min():.4f}")

# %%
# SparseNash drops weights below alpha * max and renormalises. Sparser
# strategies are easier to ship but can be exploited a little.
for alpha in (0.0, 0.5, 0.75, 1.0):
    x, y = sparsify(eq.x, alpha), sparsify(eq.y, alpha)
    print(f"alpha={alpha:<4} support {np.count_nonzero(x)}/{np.count_nonzero(y)}, "
          f"exploitability {exploitability(M, x, y):.4f}")

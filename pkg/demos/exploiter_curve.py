"""
How the best-of-K' exploiter erodes a policy
============================================

The exploiter draws K' opponent seeds and keeps the one that hurts us most.
For a policy whose per-opponent win rates are r_1 <= ... <= r_n, the
expected result has a closed form: the i-th smallest rate is the minimum
of a K'-draw with probability C(n-1-i, K'-1) / C(n, K').
"""

import numpy as np

from rsportfolio.evaluation import EvalMatrix, evaluate_vs_exploiter, expected_vs_exploiter
from rsportfolio.portfolio import SeedPolicy
from rsportfolio.prng import SplitMix64

gen = np.random.default_rng(11)
opponents = list(range(1 << 20, (1 << 20) + 40))
# two of our seeds: one strong but brittle, one steadier
black = np.vstack([gen.random(40) < 0.8, gen.random(40) < 0.6]).astype(float)
white = np.vstack([gen.random(40) < 0.7, gen.random(40) < 0.6]).astype(float)
em = EvalMatrix([0, 1], [0, 1], opponents, black, white)

policies = {
    "seed 0 only": SeedPolicy("bestseed", 0.0, {0: 1.0}, {0: 1.0}),
    "50/50 mix": SeedPolicy("nash", 0.0, {0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5}),
}
for name, pol in policies.items():
    exact = [expected_vs_exploiter(pol, em, k) for k in (1, 2, 4, 8, 16)]
    sampled = evaluate_vs_exploiter(pol, em, 8, 1000, SplitMix64(8))
    print(f"{name:12s} exact " + " ".join(f"{v:.3f}" for v in exact)
          + f" | sampled K'=8 {sampled.mean:.3f} ± {sampled.std:.3f}")

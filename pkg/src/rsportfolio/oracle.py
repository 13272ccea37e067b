"""Brute-force support enumeration for small two-player constant-sum games.

Independent of the LP and regret solvers: for every pair of equal-size
supports it solves the indifference equations and keeps the first pair that
is a genuine equilibrium. Exact for nondegenerate games (random real
matrices are nondegenerate with probability one).
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _indifferent(blocks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``blocks[b].T @ w = v, sum(w) = 1`` for every block at once."""
    nb, k, _ = blocks.shape
    lhs = np.zeros((nb, k + 1, k + 1))
    lhs[:, :k, :k] = np.transpose(blocks, (0, 2, 1))
    lhs[:, :k, k] = -1.0
    lhs[:, k, :k] = 1.0
    rhs = np.zeros((nb, k + 1))
    rhs[:, k] = 1.0
    ok = np.abs(np.linalg.det(lhs)) > 1e-12
    sol = np.full((nb, k + 1), np.nan)
    if ok.any():
        sol[ok] = np.linalg.solve(lhs[ok], rhs[ok][..., None])[..., 0]
    return sol[:, :k], sol[:, k]


def support_enumeration(A, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray, float]:
    """Return one equilibrium ``(x, y, value)`` of the game where the row player maximises ``A``."""
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    for k in range(1, min(m, n) + 1):
        rows = np.array(list(combinations(range(m), k)))
        cols = np.array(list(combinations(range(n), k)))
        ri = np.repeat(rows, len(cols), axis=0)
        ci = np.tile(cols, (len(rows), 1))
        blocks = A[ri[:, :, None], ci[:, None, :]]
        xs, vx = _indifferent(blocks)
        ys, vy = _indifferent(np.transpose(-blocks, (0, 2, 1)))
        vy = -vy
        cand = np.flatnonzero(
            np.isfinite(vx) & np.isfinite(vy)
            & (xs >= -tol).all(axis=1) & (ys >= -tol).all(axis=1)
        )
        for c in cand:
            x = np.zeros(m)
            y = np.zeros(n)
            x[ri[c]] = xs[c]
            y[ci[c]] = ys[c]
            # no profitable deviation for either side
            if (A @ y).max() <= vy[c] + 1e-9 and (x @ A).min() >= vx[c] - 1e-9:
                return x, y, float(x @ A @ y)
    raise ArithmeticError("no equilibrium found; the game is degenerate")

"""Seed policies computed from the learning matrix.

* BestSeed: the row with the largest row sum for Black, the column with the
  smallest column sum for White, ties broken by a seeded draw.
* Nash: an equilibrium ``(x, y)`` of the constant-sum game where Black picks
  a row, White a column and Black earns ``M[i, j]``.
* SparseNash: Nash weights below ``alpha * max`` set to zero, then renormalised.

Every equilibrium carries its duality gap ``max(M @ y) - min(x @ M)``; that
certificate, not the solver, is the contract.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from .prng import SplitMix64

logger = logging.getLogger(__name__)

SUM_TOL = 1e-12


class PolicyFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    method: str = "lp"  # "lp" or "regret"
    epsilon: float | None = None  # default: 1e-9 for lp, 1e-4 for regret
    max_iterations: int = 200_000

    def __post_init__(self):
        if self.method not in ("lp", "regret"):
            raise ValueError(f"unknown solver method {self.method!r}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @property
    def tolerance(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return 1e-9 if self.method == "lp" else 1e-4


@dataclass(frozen=True)
class NashEquilibrium:
    x: np.ndarray
    y: np.ndarray
    value: float
    duality_gap: float
    converged: bool = True
    iterations: int = 0


@dataclass(frozen=True)
class BestSeedPolicy:
    black_index: int
    white_index: int
    tie_break_seed: int = 0


def as_strategy(weights) -> np.ndarray:
    """Validate a mixed strategy: non-negative, summing to one."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("a mixed strategy is a non-empty vector")
    if (w < 0).any() or abs(w.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"not a probability vector (min {w.min()}, sum {w.sum()!r})")
    return w


def _normalise(w: np.ndarray) -> np.ndarray:
    w = np.clip(w, 0.0, None)
    w = w / w.sum()
    # fold the rounding residue into the largest entry so the sum is 1 to the last bit
    w[np.argmax(w)] += 1.0 - w.sum()
    return w


def best_seed(M, tie_break_seed: int = 0) -> BestSeedPolicy:
    A = np.asarray(getattr(M, "entries", M), dtype=float)
    rows = A.sum(axis=1)
    cols = A.sum(axis=0)
    rng = SplitMix64(tie_break_seed)
    black = np.flatnonzero(rows == rows.max())
    white = np.flatnonzero(cols == cols.min())
    i0 = int(black[rng.uniform_below(len(black))])
    j0 = int(white[rng.uniform_below(len(white))])
    return BestSeedPolicy(i0, j0, tie_break_seed)


def exploitability(M, x, y) -> float:
    A = np.asarray(getattr(M, "entries", M), dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if A.shape != (x.size, y.size):
        raise ValueError(f"matrix {A.shape} does not match strategies ({x.size}, {y.size})")
    return float(np.max(A @ y) - np.min(x @ A))


def _lp_side(A: np.ndarray) -> np.ndarray:
    """Maximin strategy of the row player of ``A`` by linear programming."""
    m, n = A.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-A.T, np.ones((n, 1))])
    a_eq = np.ones((1, m + 1))
    a_eq[0, -1] = 0.0
    res = linprog(
        c, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=[1.0],
        bounds=[(0, None)] * m + [(None, None)], method="highs-ds",
    )
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return _normalise(res.x[:m])


def _polish(A: np.ndarray, x: np.ndarray, y: np.ndarray, tol: float):
    """Re-solve the indifference equations on the LP supports."""
    S = np.flatnonzero(x > tol)
    T = np.flatnonzero(y > tol)
    k, l = len(S), len(T)
    sub = A[np.ix_(S, T)]
    # x on S equalises the columns in T; y on T equalises the rows in S
    lhs = np.zeros((l + 1, k + 1))
    lhs[:l, :k] = sub.T
    lhs[:l, k] = -1.0
    lhs[l, :k] = 1.0
    xs = np.linalg.lstsq(lhs, np.eye(l + 1)[l], rcond=None)[0][:k]
    lhs = np.zeros((k + 1, l + 1))
    lhs[:k, :l] = sub
    lhs[:k, l] = -1.0
    lhs[k, :l] = 1.0
    ys = np.linalg.lstsq(lhs, np.eye(k + 1)[k], rcond=None)[0][:l]
    if (xs < -1e-9).any() or (ys < -1e-9).any():
        return x, y
    nx = np.zeros_like(x)
    ny = np.zeros_like(y)
    nx[S] = xs
    ny[T] = ys
    nx, ny = _normalise(nx), _normalise(ny)
    if exploitability(A, nx, ny) < exploitability(A, x, y):
        return nx, ny
    return x, y


def _solve_lp(A: np.ndarray, eps: float) -> NashEquilibrium:
    x = _lp_side(A)
    y = _lp_side(1.0 - A.T)
    gap = exploitability(A, x, y)
    if gap > eps:
        x, y = _polish(A, x, y, 1e-12)
        gap = exploitability(A, x, y)
    return NashEquilibrium(x, y, float(x @ A @ y), gap, gap <= eps, 0)


def _solve_regret(A: np.ndarray, eps: float, max_iterations: int) -> NashEquilibrium:
    """Alternating regret matching+ with linearly weighted averages."""
    m, n = A.shape
    rx = np.zeros(m)
    ry = np.zeros(n)
    x = np.full(m, 1.0 / m)
    y = np.full(n, 1.0 / n)
    sx = np.zeros(m)
    sy = np.zeros(n)
    gap = np.inf
    t = 0
    for t in range(1, max_iterations + 1):
        ux = A @ y
        rx = np.maximum(rx + ux - x @ ux, 0.0)
        x = rx / rx.sum() if rx.sum() > 0 else np.full(m, 1.0 / m)
        uy = -(x @ A)
        ry = np.maximum(ry + uy - y @ uy, 0.0)
        y = ry / ry.sum() if ry.sum() > 0 else np.full(n, 1.0 / n)
        sx += t * x
        sy += t * y
        if t % 10 == 0:
            gap = exploitability(A, sx / sx.sum(), sy / sy.sum())
            if gap <= eps:
                break
    ax, ay = _normalise(sx), _normalise(sy)
    gap = exploitability(A, ax, ay)
    if gap > eps:
        logger.warning("regret matching stopped at gap %.3g after %d iterations", gap, t)
    return NashEquilibrium(ax, ay, float(ax @ A @ ay), gap, gap <= eps, t)


def solve_nash(M, config: SolverConfig = SolverConfig()) -> NashEquilibrium:
    A = np.asarray(getattr(M, "entries", M), dtype=float)
    if A.ndim != 2 or A.size == 0 or not np.isfinite(A).all():
        raise ValueError("payoff matrix must be a finite, non-empty 2-D array")
    if config.method == "lp":
        return _solve_lp(A, config.tolerance)
    return _solve_regret(A, config.tolerance, config.max_iterations)


def sparsify(s, alpha: float) -> np.ndarray:
    """Zero entries strictly below ``alpha * max(s)`` and renormalise."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    s = as_strategy(s)
    if alpha == 0:
        return s.copy()
    return _normalise(np.where(s < alpha * s.max(), 0.0, s))


def sparse_nash(M, alpha: float, config: SolverConfig = SolverConfig()) -> tuple[np.ndarray, np.ndarray]:
    eq = solve_nash(M, config)
    return sparsify(eq.x, alpha), sparsify(eq.y, alpha)


@dataclass
class SeedPolicy:
    """Distribution over seed indices for each colour, as stored in policy files."""

    kind: str
    alpha: float
    black: dict = field(default_factory=dict)
    white: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("bestseed", "nash", "sparsenash", "uniform"):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        for side in (self.black, self.white):
            if not side or any(p < 0 for p in side.values()):
                raise ValueError("each colour needs a non-empty, non-negative distribution")

    @classmethod
    def from_best_seed(cls, bs: BestSeedPolicy) -> "SeedPolicy":
        return cls("bestseed", 0.0, {bs.black_index: 1.0}, {bs.white_index: 1.0})

    @classmethod
    def from_strategies(cls, kind: str, alpha: float, x, y, indices=None) -> "SeedPolicy":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        idx_x = range(x.size) if indices is None else indices
        idx_y = range(y.size) if indices is None else indices
        return cls(
            kind, float(alpha),
            {int(i): float(p) for i, p in zip(idx_x, x) if p > 0},
            {int(j): float(p) for j, p in zip(idx_y, y) if p > 0},
        )

    @classmethod
    def uniform(cls, indices) -> "SeedPolicy":
        idx = [int(i) for i in indices]
        w = 1.0 / len(idx)
        return cls("uniform", 0.0, dict.fromkeys(idx, w), dict.fromkeys(idx, w))

    def side(self, black: bool) -> dict:
        return self.black if black else self.white


def _fmt_prob(p: float) -> str:
    return np.format_float_positional(p, precision=12, unique=False, fractional=False, trim="k")


def format_policy(policy: SeedPolicy) -> str:
    lines = ["seedpolicy v1", f"kind={policy.kind} alpha={policy.alpha:g}"]
    for name, side in (("black", policy.black), ("white", policy.white)):
        for idx in sorted(side):
            if side[idx] > 0:
                lines.append(f"{name} {idx} {_fmt_prob(side[idx])}")
    return "\n".join(lines) + "\n"


def write_policy(path, policy: SeedPolicy) -> None:
    Path(path).write_text(format_policy(policy))


def read_policy(path) -> SeedPolicy:
    try:
        lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    except OSError as err:
        raise PolicyFormatError(f"cannot read policy file {path}: {err}") from err
    if len(lines) < 2 or lines[0] != "seedpolicy v1":
        raise PolicyFormatError(f"{path}: missing 'seedpolicy v1' header")
    try:
        head = dict(part.split("=", 1) for part in lines[1].split())
        kind, alpha = head["kind"], float(head["alpha"])
        sides = {"black": {}, "white": {}}
        for line in lines[2:]:
            name, idx, prob = line.split()
            sides[name][int(idx)] = float(prob)
        return SeedPolicy(kind, alpha, sides["black"], sides["white"])
    except (ValueError, KeyError) as err:
        raise PolicyFormatError(f"{path}: {err}") from err

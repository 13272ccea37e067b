"""Cross-validated evaluation of seed policies.

Two criteria, both measured only against held-out opponent seeds:

* baseline: expected win rate against the randomized player, i.e. averaged
  over held-out opponent seeds;
* exploiter: an opponent draws K' held-out seeds per colour and keeps the one
  that is worst for us (an exact expectation over our policy).

Win rates are averaged over our Black and White games. ``std`` fields are
standard errors of the reported mean.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, astuple, dataclass, fields, replace
from typing import Iterable, Sequence

import numpy as np
from scipy.special import comb
from scipy.stats import binomtest

from .prng import SplitMix64
from .seedmatrix import GameJournal, MatchupConfig, play_cells

DEFAULT_KPRIME = (1, 2, 4, 8, 16)


class OverlapError(ValueError):
    """Evaluation opponents intersect the training seeds."""


@dataclass(frozen=True)
class EvalConfig:
    heldout_count: int = 100
    games_per_pair: int = 1
    kprime_list: tuple[int, ...] = DEFAULT_KPRIME
    repetitions: int = 1000
    eval_seed: int = 0x5EED

    def __post_init__(self):
        if self.heldout_count < 1 or self.games_per_pair < 1 or self.repetitions < 1:
            raise ValueError("heldout_count, games_per_pair and repetitions must be positive")
        too_big = [k for k in self.kprime_list if not 1 <= k <= self.heldout_count]
        if too_big:
            raise ValueError(f"K' values {too_big} exceed the held-out pool of {self.heldout_count}")


@dataclass(frozen=True)
class WinRateReport:
    mean: float
    std: float
    as_black: float
    as_white: float
    n: int


@dataclass
class EvalMatrix:
    """Our seeds (rows) against held-out opponents (columns), per colour.

    ``black[s, o]`` is our win rate with row seed ``black_rows[s]`` as Black
    against White opponent ``opponents[o]``; ``white`` likewise with us as White.
    """

    black_rows: list[int]
    white_rows: list[int]
    opponents: list[int]
    black: np.ndarray
    white: np.ndarray

    def restrict(self, black_rows: Sequence[int], white_rows: Sequence[int]) -> "EvalMatrix":
        bi = [self.black_rows.index(s) for s in black_rows]
        wi = [self.white_rows.index(s) for s in white_rows]
        return EvalMatrix(list(black_rows), list(white_rows), list(self.opponents),
                          self.black[bi], self.white[wi])


def check_disjoint(training: Iterable[int], heldout: Iterable[int]) -> None:
    overlap = set(training) & set(heldout)
    if overlap:
        raise OverlapError(f"held-out opponents reuse training seeds {sorted(overlap)[:5]}")


def _replica(matchup: MatchupConfig, r: int) -> MatchupConfig:
    if r == 0:
        return matchup
    return replace(matchup, base_seed=SplitMix64(matchup.base_seed ^ (r << 32)).next_u64())


def build_eval_matrix(
    black_support: Iterable[int],
    white_support: Iterable[int],
    config: EvalConfig,
    matchup: MatchupConfig,
    journal=None,
    workers: int = 1,
) -> EvalMatrix:
    black_rows = sorted(set(black_support))
    white_rows = sorted(set(white_support))
    if not black_rows or not white_rows:
        raise ValueError("policy support must be non-empty for both colours")
    opponents = list(matchup.heldout_indices(config.heldout_count))
    check_disjoint(black_rows + white_rows, opponents)
    black = np.zeros((len(black_rows), len(opponents)))
    white = np.zeros((len(white_rows), len(opponents)))
    for r in range(config.games_per_pair):
        mu = _replica(matchup, r)
        jr = None
        if journal is not None:
            path = journal if r == 0 else f"{journal}.{r}"
            jr = GameJournal(path, mu.game_fingerprint())
        cells = [(s, o) for s in black_rows for o in opponents] + [(o, s) for s in white_rows for o in opponents]
        res = play_cells(cells, mu, jr, workers)
        black += np.array([[res[s, o] for o in opponents] for s in black_rows])
        white += np.array([[1 - res[o, s] for o in opponents] for s in white_rows])
    return EvalMatrix(black_rows, white_rows, opponents, black / config.games_per_pair, white / config.games_per_pair)


def _weights(dist: dict, rows: list[int]) -> np.ndarray:
    missing = set(dist) - set(rows)
    if missing:
        raise ValueError(f"policy seeds {sorted(missing)} have no evaluation games")
    w = np.array([dist.get(s, 0.0) for s in rows])
    return w / w.sum()


def opponent_rates(policy, em: EvalMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Our exact expected win rate against each held-out opponent, per colour."""
    b = _weights(policy.black, em.black_rows) @ em.black
    w = _weights(policy.white, em.white_rows) @ em.white
    return b, w


def evaluate_vs_baseline(policy, em: EvalMatrix) -> WinRateReport:
    b, w = opponent_rates(policy, em)
    per_opp = (b + w) / 2
    se = float(per_opp.std(ddof=1) / math.sqrt(len(per_opp))) if len(per_opp) > 1 else 0.0
    return WinRateReport(float((b.mean() + w.mean()) / 2), se, float(b.mean()), float(w.mean()), len(per_opp))


def evaluate_vs_exploiter(policy, em: EvalMatrix, kprime: int, repetitions: int, rng: SplitMix64) -> WinRateReport:
    """Sampled best-of-K' opponent; draws K' distinct opponents per colour per repetition."""
    b, w = opponent_rates(policy, em)
    pool = len(em.opponents)
    if not 1 <= kprime <= pool:
        raise ValueError(f"K'={kprime} needs at least that many held-out opponents, have {pool}")
    bmin = np.empty(repetitions)
    wmin = np.empty(repetitions)
    for r in range(repetitions):
        bmin[r] = b[rng.sample_without_replacement(pool, kprime)].min()
        wmin[r] = w[rng.sample_without_replacement(pool, kprime)].min()
    both = (bmin + wmin) / 2
    se = float(both.std(ddof=1) / math.sqrt(repetitions)) if repetitions > 1 else 0.0
    return WinRateReport(float(both.mean()), se, float(bmin.mean()), float(wmin.mean()), repetitions)


def expected_min_of_draw(rates, kprime: int) -> float:
    """E[min of K' values drawn without replacement], by order statistics."""
    r = np.sort(np.asarray(rates, dtype=float))
    n = len(r)
    if not 1 <= kprime <= n:
        raise ValueError(f"K'={kprime} outside 1..{n}")
    # P(the i-th smallest is the minimum) = C(n-1-i, K'-1) / C(n, K') for 0-based i
    p = comb(n - 1 - np.arange(n), kprime - 1, exact=False) / comb(n, kprime, exact=False)
    return float(p @ r)


def expected_vs_exploiter(policy, em: EvalMatrix, kprime: int) -> float:
    b, w = opponent_rates(policy, em)
    return (expected_min_of_draw(b, kprime) + expected_min_of_draw(w, kprime)) / 2


def binomial_interval(wins: int, games: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(int(wins), int(games)).proportion_ci(confidence_level=level, method="exact")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class ReportRow:
    method: str
    board: int
    K: int
    alpha: float
    kprime: int
    mean: float
    std: float
    as_black: float
    as_white: float
    n: int

    @classmethod
    def from_report(cls, method, board, K, alpha, kprime, rep: WinRateReport) -> "ReportRow":
        return cls(method, board, K, alpha, kprime, **asdict(rep))


CSV_COLUMNS = [f.name for f in fields(ReportRow)]


def to_csv(rows: Iterable[ReportRow]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(CSV_COLUMNS)
    for row in rows:
        out.writerow([repr(v) if isinstance(v, float) else v for v in astuple(row)])
    return buf.getvalue()


def read_csv(text: str) -> list[ReportRow]:
    rows = []
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    for rec in reader:
        rows.append(ReportRow(
            rec["method"], int(rec["board"]), int(rec["K"]), float(rec["alpha"]), int(rec["kprime"]),
            float(rec["mean"]), float(rec["std"]), float(rec["as_black"]), float(rec["as_white"]), int(rec["n"]),
        ))
    return rows


def format_cell(mean: float, std: float) -> str:
    return f"{100 * mean:.1f} ± {100 * std:.1f}"


def summarize(rows: Sequence[ReportRow]) -> str:
    """Markdown table: one line per (method, alpha, board, K), one column per K'."""
    kps = sorted({r.kprime for r in rows})
    keys = list(dict.fromkeys((r.method, r.alpha, r.board, r.K) for r in rows))
    cells = {(r.method, r.alpha, r.board, r.K, r.kprime): r for r in rows}
    head = ["method", "board", "K"] + [f"K'={k}" for k in kps]
    body = []
    for method, alpha, board, K in keys:
        label = method if method != "sparsenash" else f"sparsenash α={alpha:g}"
        line = [label, f"{board}x{board}", str(K)]
        for k in kps:
            r = cells.get((method, alpha, board, K, k))
            line.append(format_cell(r.mean, r.std) if r else "")
        body.append(line)
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    fmt = lambda xs: "| " + " | ".join(x.ljust(w) for x, w in zip(xs, widths)) + " |"
    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([fmt(head), sep, *map(fmt, body)])

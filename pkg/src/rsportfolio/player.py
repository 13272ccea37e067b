"""Flat Monte Carlo Phantom Go player.

For each candidate move the player samples ``playouts_per_move``
determinizations, plays the candidate on each and finishes with a uniform
random playout; the candidate with the highest mean win indicator is
proposed. Random draws happen in a fixed order (candidates in scan order with
pass last, playouts inner) so a seeded player is a deterministic policy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .belief import PlayerView
from .go import DEFAULT_KOMI, Board, Color, Move
from .prng import SplitMix64


@dataclass(frozen=True)
class McConfig:
    playouts_per_move: int = 20
    playout_move_cap: int | None = None  # default 3 * size**2
    komi: float = DEFAULT_KOMI

    def __post_init__(self):
        if self.playouts_per_move < 1:
            raise ValueError("playouts_per_move must be >= 1")

    def cap_for(self, size: int) -> int:
        return 3 * size * size if self.playout_move_cap is None else self.playout_move_cap


def choose_move(view: PlayerView, rng: SplitMix64, config: McConfig) -> Move:
    orth, diag = K.neighbour_tables(view.size)
    arr = rng.as_array()
    p = K.choose_move(
        view.own, view.known, view.illegal, view.opponent_stone_count, int(view.color),
        view.opponent_passed, config.playouts_per_move, config.cap_for(view.size),
        float(config.komi), orth, diag, arr,
    )
    rng.state = int(arr[0])
    return None if p < 0 else divmod(int(p), view.size)


def playout(board: Board, to_move: Color, rng: SplitMix64, config: McConfig,
            record: bool = False) -> Color | tuple[Color, list[Move]]:
    """Random playout from ``board``; with ``record`` also returns the move list."""
    orth, diag = K.neighbour_tables(board.size)
    cap = config.cap_for(board.size)
    log = np.empty(cap + 1 if record else 0, dtype=np.int32)
    arr = rng.as_array()
    flat = board.flat()
    ko = -1 if board.ko_point is None else board.index(board.ko_point)
    w = K.playout(flat, orth, diag, int(to_move), ko, 0, cap, float(config.komi), arr, log)
    rng.state = int(arr[0])
    if not record:
        return Color(w)
    moves = [None if q < 0 else board.point(q) for q in log[: log[-1]]]
    return Color(w), moves

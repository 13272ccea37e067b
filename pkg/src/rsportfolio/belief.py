"""One player's information set and determinization sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .go import Board, Color, Point
from .prng import SplitMix64
from .referee import Accepted, GameOver, Illegal, OpponentMoved, StonesLost


class DesyncError(RuntimeError):
    """A referee message contradicts the player's own record."""


@dataclass
class PlayerView:
    size: int
    color: Color
    own: np.ndarray = field(default=None, repr=False)
    known: np.ndarray = field(default=None, repr=False)
    illegal: np.ndarray = field(default=None, repr=False)
    opponent_stone_count: int = 0
    opponent_passed: bool = False
    relaxations: int = 0

    def __post_init__(self):
        npts = self.size * self.size
        for name in ("own", "known", "illegal"):
            if getattr(self, name) is None:
                setattr(self, name, np.zeros(npts, dtype=np.bool_))

    def copy(self) -> "PlayerView":
        return PlayerView(
            self.size, self.color, self.own.copy(), self.known.copy(), self.illegal.copy(),
            self.opponent_stone_count, self.opponent_passed, self.relaxations,
        )

    def _idx(self, p: Point) -> int:
        return p[0] * self.size + p[1]

    def _points(self, mask: np.ndarray) -> set[Point]:
        return {divmod(int(i), self.size) for i in np.flatnonzero(mask)}

    @property
    def own_stones(self) -> set[Point]:
        return self._points(self.own)

    @property
    def known_opponent_points(self) -> set[Point]:
        return self._points(self.known)

    @property
    def illegal_this_turn(self) -> set[Point]:
        return self._points(self.illegal)

    def board(self) -> Board:
        """Own stones plus known opponent stones."""
        grid = np.zeros(self.size * self.size, dtype=np.int8)
        grid[self.own] = int(self.color)
        grid[self.known] = int(self.color.opponent)
        return Board(self.size, grid)


def update_view(view: PlayerView, event) -> PlayerView:
    """Fold one referee message into the view, in place; returns the view."""
    if isinstance(event, Illegal):
        i = view._idx(event.move)
        if view.own[i]:
            raise DesyncError(f"referee rejected {event.move}, which holds our own stone")
        view.illegal[i] = True
        # A rejection with every opponent stone already located cannot be a
        # hidden stone; it was ko or suicide, so it stays out of `known`.
        if view.known[i] or view.known.sum() < view.opponent_stone_count:
            view.known[i] = True
    elif isinstance(event, Accepted):
        view.illegal[:] = False
        if event.move is not None:
            i = view._idx(event.move)
            if view.own[i] or view.known[i]:
                raise DesyncError(f"referee accepted {event.move} on a point we believe occupied")
            view.own[i] = True
            for p in event.captured:
                j = view._idx(p)
                if view.own[j]:
                    raise DesyncError(f"captured point {p} holds our own stone")
                view.known[j] = False
            view.opponent_stone_count -= len(event.captured)
            if view.opponent_stone_count < 0:
                raise DesyncError("captured more stones than the opponent has")
        view.opponent_passed = False
    elif isinstance(event, OpponentMoved):
        view.opponent_passed = event.passed
        if not event.passed:
            view.opponent_stone_count += 1
    elif isinstance(event, StonesLost):
        for p in event.points:
            j = view._idx(p)
            if not view.own[j]:
                raise DesyncError(f"lost stone at {p} that we never had")
            view.own[j] = False
    elif isinstance(event, GameOver):
        pass
    else:
        raise TypeError(f"unknown event {event!r}")
    return view


def determinize(view: PlayerView, rng: SplitMix64, exclude: Point | None = None) -> Board:
    """Sample a full board consistent with ``view``; advances ``rng``."""
    orth, _ = K.neighbour_tables(view.size)
    arr = rng.as_array()
    out = np.empty(view.size * view.size, dtype=np.int8)
    ex = -1 if exclude is None else view._idx(exclude)
    relaxed = K.determinize(
        view.own, view.known, view.opponent_stone_count, int(view.color), ex, orth, arr, out
    )
    rng.state = int(arr[0])
    if relaxed:
        view.relaxations += 1
    return Board(view.size, out)

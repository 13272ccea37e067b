"""Go rules on square boards: capture, suicide, simple ko, area scoring.

Points are ``(row, col)`` tuples and a pass is ``None``. Boards are
immutable from the caller's side: :func:`apply_move` returns a new board.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as K

Point = tuple[int, int]
Move = Optional[Point]
PASS: Move = None

DEFAULT_KOMI = 7.5


class Color(enum.IntEnum):
    BLACK = 1
    WHITE = 2

    @property
    def opponent(self) -> "Color":
        return Color(3 - self)

    @property
    def letter(self) -> str:
        return "B" if self is Color.BLACK else "W"


class IllegalReason(enum.Enum):
    OCCUPIED = "occupied"
    SUICIDE = "suicide"
    KO = "ko"


_CODES = {K.OCCUPIED: IllegalReason.OCCUPIED, K.SUICIDE: IllegalReason.SUICIDE, K.KO: IllegalReason.KO}


class IllegalMoveError(ValueError):
    def __init__(self, reason: IllegalReason, move: Move):
        super().__init__(f"illegal move {move}: {reason.value}")
        self.reason = reason
        self.move = move


@dataclass(frozen=True)
class Score:
    black_area: int
    white_area: int


@dataclass(frozen=True, eq=False)
class Board:
    size: int
    points: np.ndarray = field(repr=False)
    ko_point: Optional[Point] = None

    def __post_init__(self):
        if not 2 <= self.size <= 19:
            raise ValueError(f"board size must be in 2..19, got {self.size}")
        pts = np.asarray(self.points, dtype=np.int8).reshape(self.size, self.size)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def empty(cls, size: int) -> "Board":
        return cls(size, np.zeros((size, size), dtype=np.int8))

    @classmethod
    def from_diagram(cls, text: str | list[str], ko_point: Optional[Point] = None) -> "Board":
        rows = text.split() if isinstance(text, str) else list(text)
        size = len(rows)
        table = {".": 0, "X": 1, "O": 2}
        try:
            grid = [[table[ch] for ch in row] for row in rows]
        except KeyError as err:
            raise ValueError(f"unknown board character {err}") from None
        if any(len(row) != size for row in grid):
            raise ValueError("board diagram must be square")
        return cls(size, np.array(grid, dtype=np.int8), ko_point)

    def diagram(self) -> str:
        return "\n".join("".join(".XO"[v] for v in row) for row in self.points)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Board)
            and self.size == other.size
            and self.ko_point == other.ko_point
            and np.array_equal(self.points, other.points)
        )

    def __hash__(self):
        return hash((self.size, self.points.tobytes(), self.ko_point))

    def __getitem__(self, point: Point) -> int:
        return int(self.points[point])

    def flat(self) -> np.ndarray:
        return self.points.reshape(-1).copy()

    def index(self, point: Point) -> int:
        r, c = point
        if not (0 <= r < self.size and 0 <= c < self.size):
            raise ValueError(f"point {point} outside {self.size}x{self.size} board")
        return r * self.size + c

    def point(self, index: int) -> Point:
        return divmod(int(index), self.size)

    def chains(self) -> list[tuple[int, list[Point], int]]:
        """All chains as ``(color, stones, liberty_count)``."""
        out, seen = [], set()
        for r in range(self.size):
            for c in range(self.size):
                color = self[r, c]
                if color == 0 or (r, c) in seen:
                    continue
                stones, libs, stack = [], set(), [(r, c)]
                seen.add((r, c))
                while stack:
                    p = stack.pop()
                    stones.append(p)
                    for q in _around(p, self.size):
                        v = self[q]
                        if v == 0:
                            libs.add(q)
                        elif v == color and q not in seen:
                            seen.add(q)
                            stack.append(q)
                out.append((color, stones, len(libs)))
        return out


def _around(p: Point, size: int):
    r, c = p
    for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
        if 0 <= rr < size and 0 <= cc < size:
            yield rr, cc


def apply_move(board: Board, color: Color, move: Move) -> tuple[Board, list[Point]]:
    """Play ``move`` for ``color``; raises :class:`IllegalMoveError`."""
    if move is None:
        return Board(board.size, board.points), []
    p = board.index(move)
    orth, _ = K.neighbour_tables(board.size)
    flat = board.flat()
    npts = flat.shape[0]
    ko = -1 if board.ko_point is None else board.index(board.ko_point)
    captured = np.empty(npts, dtype=np.int32)
    code, new_ko = K.play(
        flat, orth, int(color), p, ko, captured,
        np.empty(npts, dtype=np.int32), np.zeros(npts, dtype=np.bool_),
    )
    if code < 0:
        raise IllegalMoveError(_CODES[code], move)
    ko_point = None if new_ko < 0 else board.point(new_ko)
    return Board(board.size, flat, ko_point), sorted(board.point(q) for q in captured[:code])


def area_score(board: Board) -> Score:
    orth, _ = K.neighbour_tables(board.size)
    b, w = K.area_score(board.flat(), orth)
    return Score(int(b), int(w))


def is_eyelike(board: Board, color: Color, point: Point) -> bool:
    orth, diag = K.neighbour_tables(board.size)
    return bool(K.is_eyelike(board.flat(), orth, diag, int(color), board.index(point)))


def winner(score: Score, komi: float = DEFAULT_KOMI) -> Color:
    return Color.BLACK if score.black_area - score.white_area > komi else Color.WHITE

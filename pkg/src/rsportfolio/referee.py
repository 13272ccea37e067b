"""Phantom Go referee: the only holder of the true board.

Players talk to the referee through :meth:`Referee.propose`. The mover gets
``Accepted`` (with the points it captured), ``Illegal`` or ``GameOver``; the
other player is told only that the opponent moved or passed, plus which of its
own stones were removed. Every message a player receives is also kept in
``Referee.messages[color]``.

Transcript lines::

    B (2,2) OK cap=[]
    W (1,3) ILLEGAL
    B pass OK
    RESULT B+12.5
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .go import DEFAULT_KOMI, Board, Color, IllegalMoveError, Move, Point, Score, apply_move, area_score, winner


@dataclass(frozen=True)
class Accepted:
    move: Move
    captured: tuple[Point, ...] = ()


@dataclass(frozen=True)
class Illegal:
    move: Point


@dataclass(frozen=True)
class GameOver:
    score: Score
    winner: Color
    margin: float  # black_area - white_area - komi


@dataclass(frozen=True)
class OpponentMoved:
    passed: bool


@dataclass(frozen=True)
class StonesLost:
    points: tuple[Point, ...]


RefereeReply = Accepted | Illegal | GameOver


class GameNotOverError(RuntimeError):
    pass


def _fmt_point(p: Point) -> str:
    return f"({p[0]},{p[1]})"


def format_result(margin: float) -> str:
    side = "B" if margin > 0 else "W"
    return f"RESULT {side}+{abs(margin):g}"


@dataclass
class Referee:
    size: int
    komi: float = DEFAULT_KOMI
    move_cap: int | None = None
    board: Board = field(init=False)
    to_move: Color = field(init=False, default=Color.BLACK)
    consecutive_passes: int = field(init=False, default=0)
    moves_played: dict = field(init=False)
    transcript: list[str] = field(init=False, default_factory=list)
    messages: dict = field(init=False)
    over: GameOver | None = field(init=False, default=None)
    capped: bool = field(init=False, default=False)

    def __post_init__(self):
        if self.move_cap is None:
            self.move_cap = 4 * self.size * self.size
        self.board = Board.empty(self.size)
        self.moves_played = {Color.BLACK: 0, Color.WHITE: 0}
        self.messages = {Color.BLACK: [], Color.WHITE: []}

    def _tell(self, color: Color, event) -> None:
        self.messages[color].append(event)

    def propose(self, color: Color, move: Move) -> RefereeReply:
        if self.over is not None:
            raise RuntimeError("game is already over")
        if color != self.to_move:
            raise RuntimeError(f"{color.name} proposed out of turn")
        opp = color.opponent
        if move is None:
            self.consecutive_passes += 1
            self.board = Board(self.size, self.board.points)  # pass clears ko
            self.transcript.append(f"{color.letter} pass OK")
            reply: RefereeReply = Accepted(None)
            notice = OpponentMoved(passed=True)
            lost = ()
        else:
            try:
                self.board, captured = apply_move(self.board, color, move)
            except IllegalMoveError:
                self.transcript.append(f"{color.letter} {_fmt_point(move)} ILLEGAL")
                reply = Illegal(move)
                self._tell(color, reply)
                return reply
            self.consecutive_passes = 0
            caps = ",".join(_fmt_point(p) for p in captured)
            self.transcript.append(f"{color.letter} {_fmt_point(move)} OK cap=[{caps}]")
            reply = Accepted(move, tuple(captured))
            notice = OpponentMoved(passed=False)
            lost = tuple(captured)
        self.moves_played[color] += 1
        self.to_move = opp
        self._tell(color, reply)
        self._tell(opp, notice)
        if lost:
            self._tell(opp, StonesLost(lost))
        total = sum(self.moves_played.values())
        if self.consecutive_passes >= 2 or total >= self.move_cap:
            self.capped = self.consecutive_passes < 2
            score = area_score(self.board)
            margin = score.black_area - score.white_area - self.komi
            self.over = GameOver(score, winner(score, self.komi), margin)
            self.transcript.append(format_result(margin))
            self._tell(color, self.over)
            self._tell(opp, self.over)
            return self.over
        return reply

    def result(self, komi: float | None = None) -> Color:
        if self.over is None:
            raise GameNotOverError("result requested before the game ended")
        if komi is None:
            return self.over.winner
        return winner(self.over.score, komi)


def result(state: Referee, komi: float = DEFAULT_KOMI) -> Color:
    return state.result(komi)


_LINE = re.compile(r"^([BW]) (pass|\((\d+),(\d+)\)) (OK|ILLEGAL)(?: cap=\[(.*)\])?$")
_POINT = re.compile(r"\((\d+),(\d+)\)")


def parse_transcript(lines: list[str]) -> tuple[list[tuple[Color, Move, bool, tuple[Point, ...]]], str | None]:
    """Split a transcript into ``(color, move, accepted, captured)`` events and the result line."""
    events, final = [], None
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("RESULT"):
            final = line
            continue
        m = _LINE.match(line)
        if m is None:
            raise ValueError(f"malformed transcript line: {line!r}")
        color = Color.BLACK if m.group(1) == "B" else Color.WHITE
        move = None if m.group(2) == "pass" else (int(m.group(3)), int(m.group(4)))
        caps = tuple((int(a), int(b)) for a, b in _POINT.findall(m.group(6) or ""))
        events.append((color, move, m.group(5) == "OK", caps))
    return events, final


def replay_transcript(lines: list[str], size: int, komi: float = DEFAULT_KOMI) -> Referee:
    """Re-run a transcript through a fresh referee, checking every ruling."""
    ref = Referee(size, komi, move_cap=10**9)
    events, final = parse_transcript(lines)
    for color, move, accepted, caps in events:
        if ref.over is not None:
            raise ValueError("transcript continues after the game ended")
        reply = ref.propose(color, move)
        if isinstance(reply, Illegal) == accepted:
            raise ValueError(f"replay disagrees on legality of {color.letter} {move}")
        if isinstance(reply, Accepted) and reply.captured != caps:
            raise ValueError(f"replay disagrees on captures of {color.letter} {move}")
    if final is not None:
        score = area_score(ref.board)
        if format_result(score.black_area - score.white_area - komi) != final:
            raise ValueError("replay disagrees on the result")
    return ref

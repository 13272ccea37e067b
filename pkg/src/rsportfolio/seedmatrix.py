"""Round-robin self-play of seeded players into the K x K learning matrix.

Row ``i`` is the Black player built from seed index ``i``, column ``j`` the
White player from index ``j``; ``M[i, j] = 1`` iff Black wins. Index ``i``
is mixed with the base seed and the colour, so Black-``i`` and White-``i``
are unrelated players. Validation indices start at ``heldout_offset``.

File formats::

    seedmatrix v1          # matrix file
    K=3
    fingerprint=0123456789abcdef
    010
    110
    001

    # fingerprint=0123456789abcdef     (journal header, then one cell per line)
    0 2 1
"""

from __future__ import annotations

import hashlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional

import multiprocessing as mp
import numpy as np

from .belief import PlayerView, update_view
from .go import DEFAULT_KOMI, Color
from .player import McConfig, choose_move
from .prng import SplitMix64
from .referee import Referee

logger = logging.getLogger(__name__)

HELDOUT_OFFSET = 1 << 20
# bump whenever rules, playout or player behaviour changes game outcomes
ENGINE_VERSION = 1


class FingerprintMismatch(RuntimeError):
    pass


class MatrixFormatError(ValueError):
    pass


class DesyncAbort(RuntimeError):
    pass


@dataclass(frozen=True)
class MatchupConfig:
    board_size: int = 5
    komi: float = DEFAULT_KOMI
    mc: McConfig = field(default_factory=McConfig)
    K: int = 10
    base_seed: int = 0
    heldout_offset: int = HELDOUT_OFFSET

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if self.heldout_offset < self.K:
            raise ValueError("validation indices would overlap the training indices")
        if self.mc.komi != self.komi:
            raise ValueError("mc.komi must equal the matchup komi")

    def game_key(self) -> str:
        """Everything that decides one game's outcome."""
        mc = self.mc
        return (
            f"board={self.board_size};komi={self.komi!r};playouts={mc.playouts_per_move};"
            f"playout_cap={mc.cap_for(self.board_size)};move_cap={4 * self.board_size ** 2};"
            f"base_seed={self.base_seed};engine={ENGINE_VERSION}"
        )

    def game_fingerprint(self) -> str:
        return hashlib.sha256(self.game_key().encode()).hexdigest()[:16]

    def fingerprint(self) -> str:
        key = f"{self.game_key()};K={self.K};heldout_offset={self.heldout_offset}"
        return hashlib.sha256(key.encode()).hexdigest()[:16]

    def training_indices(self) -> range:
        return range(self.K)

    def heldout_indices(self, count: int) -> range:
        return range(self.heldout_offset, self.heldout_offset + count)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["mc"] = asdict(self.mc)
        return d


def derive_player_seed(base_seed: int, index: int, color: Color) -> int:
    tag = (int(index) << 1) | (0 if color == Color.BLACK else 1)
    return SplitMix64(int(base_seed) ^ tag).next_u64()


@dataclass
class GameRecord:
    black_index: int
    white_index: int
    outcome: int
    transcript: list[str]
    capped: bool
    relaxations: int
    messages: dict


def play_seeded_game(i: int, j: int, config: MatchupConfig, keep_messages: bool = False) -> GameRecord:
    size = config.board_size
    ref = Referee(size, config.komi)
    views = {c: PlayerView(size, c) for c in Color}
    rngs = {
        Color.BLACK: SplitMix64(derive_player_seed(config.base_seed, i, Color.BLACK)),
        Color.WHITE: SplitMix64(derive_player_seed(config.base_seed, j, Color.WHITE)),
    }
    read = {c: 0 for c in Color}
    while ref.over is None:
        mover = ref.to_move
        ref.propose(mover, choose_move(views[mover], rngs[mover], config.mc))
        for c in Color:
            inbox = ref.messages[c]
            for event in inbox[read[c]:]:
                update_view(views[c], event)
            read[c] = len(inbox)
        _check_sync(ref, views)
    outcome = 1 if ref.result() == Color.BLACK else 0
    return GameRecord(
        i, j, outcome, list(ref.transcript), ref.capped,
        views[Color.BLACK].relaxations + views[Color.WHITE].relaxations,
        ref.messages if keep_messages else {},
    )


def _check_sync(ref: Referee, views: dict) -> None:
    flat = ref.board.points.reshape(-1)
    for c, view in views.items():
        if not np.array_equal(view.own, flat == int(c)):
            raise DesyncAbort(f"{c.name} view of its own stones diverged from the referee\n{ref.board.diagram()}")
        if view.opponent_stone_count != int((flat == int(c.opponent)).sum()):
            raise DesyncAbort(f"{c.name} opponent stone count diverged from the referee")


@dataclass
class ResultMatrix:
    K: int
    entries: np.ndarray
    fingerprint: str

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.uint8)
        if self.entries.shape != (self.K, self.K):
            raise ValueError(f"entries shape {self.entries.shape} does not match K={self.K}")
        if not np.isin(self.entries, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ResultMatrix)
            and self.K == other.K
            and self.fingerprint == other.fingerprint
            and np.array_equal(self.entries, other.entries)
        )


def format_matrix(m: ResultMatrix) -> str:
    rows = ["".join(str(int(v)) for v in row) for row in m.entries]
    return "\n".join(["seedmatrix v1", f"K={m.K}", f"fingerprint={m.fingerprint}", *rows]) + "\n"


def write_matrix(path, m: ResultMatrix) -> None:
    Path(path).write_text(format_matrix(m))


def read_matrix(path) -> ResultMatrix:
    try:
        lines = Path(path).read_text().split("\n")
    except OSError as err:
        raise MatrixFormatError(f"cannot read matrix file {path}: {err}") from err
    lines = [ln.strip() for ln in lines if ln.strip()]
    if len(lines) < 3 or lines[0] != "seedmatrix v1":
        raise MatrixFormatError(f"{path}: missing 'seedmatrix v1' header")
    if not lines[1].startswith("K="):
        raise MatrixFormatError(f"{path}: line 2 must be K=<K>")
    try:
        k = int(lines[1][2:])
    except ValueError:
        raise MatrixFormatError(f"{path}: bad K line {lines[1]!r}") from None
    fp = lines[2].removeprefix("fingerprint=")
    if not lines[2].startswith("fingerprint=") or len(fp) != 16:
        raise MatrixFormatError(f"{path}: line 3 must be fingerprint=<16 hex digits>")
    rows = lines[3:]
    if len(rows) != k or any(len(r) != k or set(r) - {"0", "1"} for r in rows):
        raise MatrixFormatError(f"{path}: expected {k} rows of {k} binary digits")
    entries = np.array([[int(ch) for ch in r] for r in rows], dtype=np.uint8)
    return ResultMatrix(k, entries, fp)


class GameJournal:
    """Append-only record of finished games, guarded by a fingerprint header."""

    def __init__(self, path, fingerprint: str):
        self.path = Path(path)
        self.fingerprint = fingerprint

    def load(self) -> dict[tuple[int, int], int]:
        if not self.path.exists() or self.path.stat().st_size == 0:
            return {}
        text = self.path.read_text()
        header, _, body = text.partition("\n")
        if header.strip() != f"# fingerprint={self.fingerprint}":
            raise FingerprintMismatch(
                f"{self.path} was written for {header.strip()!r}, not fingerprint={self.fingerprint}"
            )
        if not text.endswith("\n"):
            # torn final line after a crash: drop it so the next append starts clean
            text = text[: text.rfind("\n") + 1]
            with self.path.open("r+") as fh:
                fh.truncate(len(text.encode()))
            body = text.partition("\n")[2]
        cells = {}
        for line in body.splitlines():
            parts = line.split()
            if len(parts) != 3:
                raise MatrixFormatError(f"{self.path}: malformed journal line {line!r}")
            i, j, bit = map(int, parts)
            cells[i, j] = bit
        return cells

    def append(self, i: int, j: int, bit: int) -> None:
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        with self.path.open("a") as fh:
            if fresh:
                fh.write(f"# fingerprint={self.fingerprint}\n")
            fh.write(f"{i} {j} {bit}\n")


def _outcome(args) -> tuple[int, int, int]:
    i, j, config = args
    return i, j, play_seeded_game(i, j, config).outcome


def play_cells(
    cells: Iterable[tuple[int, int]],
    config: MatchupConfig,
    journal: Optional[GameJournal] = None,
    workers: int = 1,
    progress: Optional[Callable[[int, int], None]] = None,
) -> dict[tuple[int, int], int]:
    """Outcome bits for (black index, white index) cells, reusing journaled games."""
    cells = list(dict.fromkeys(cells))
    done = journal.load() if journal is not None else {}
    results = {c: done[c] for c in cells if c in done}
    todo = [c for c in cells if c not in results]
    if todo:
        logger.info("playing %d games (%d already journaled)", len(todo), len(results))
    tasks = [(i, j, config) for i, j in todo]
    if workers > 1 and len(tasks) > 1:
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            stream = pool.map(_outcome, tasks, chunksize=1)
            _collect(stream, results, journal, progress, len(todo))
    else:
        _collect(map(_outcome, tasks), results, journal, progress, len(todo))
    return results


def _collect(stream, results, journal, progress, total):
    for n, (i, j, bit) in enumerate(stream, 1):
        results[i, j] = bit
        if journal is not None:
            journal.append(i, j, bit)
        if progress is not None:
            progress(n, total)


def build_matrix(
    config: MatchupConfig,
    journal=None,
    workers: int = 1,
    progress: Optional[Callable[[int, int], None]] = None,
) -> ResultMatrix:
    """Fill all K*K cells; ``journal`` (a path) makes the build resumable."""
    fp = config.fingerprint()
    jr = GameJournal(journal, fp) if journal is not None else None
    k = config.K
    cells = [(i, j) for i in range(k) for j in range(k)]
    results = play_cells(cells, config, jr, workers, progress)
    entries = np.zeros((k, k), dtype=np.uint8)
    for (i, j), bit in results.items():
        entries[i, j] = bit
    return ResultMatrix(k, entries, fp)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)

"""Quick consistency checks run by ``rsportfolio selfcheck``."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .go import Board, Color, IllegalMoveError, apply_move, area_score, is_eyelike
from .oracle import support_enumeration
from .portfolio import solve_nash, sparsify
from .prng import SplitMix64

# first outputs of the reference splitmix64.c for the given seeds
SPLITMIX_VECTORS = {
    0: [16294208416658607535, 7960286522194355700, 487617019471545679, 17909611376780542444],
    1: [10451216379200822465],
    2: [10905525725756348110],
}

_COLORS = {"B": Color.BLACK, "W": Color.WHITE}


def default_fixture_path() -> Path:
    return Path(str(resources.files("rsportfolio") / "data" / "rules_fixtures.json"))


def load_fixtures(path=None) -> list[dict]:
    return json.loads(Path(path or default_fixture_path()).read_text())


def _pt(p):
    return None if p is None else tuple(p)


def run_fixture(fx: dict) -> str | None:
    """Return None on success, otherwise a short failure description."""
    board = Board.from_diagram(fx["board"], _pt(fx.get("ko")))
    kind = fx["kind"]
    if kind == "score":
        s = area_score(board)
        if (s.black_area, s.white_area) != (fx["black"], fx["white"]):
            return f"score ({s.black_area}, {s.white_area}) != ({fx['black']}, {fx['white']})"
        return None
    if kind == "eyelike":
        got = is_eyelike(board, _COLORS[fx["color"]], _pt(fx["point"]))
        return None if got == fx["expect"] else f"eyelike {got} != {fx['expect']}"
    if kind != "move":
        return f"unknown fixture kind {kind!r}"
    for letter, p in fx.get("sequence", []):
        board, _ = apply_move(board, _COLORS[letter], _pt(p))
    letter, p = fx["play"]
    try:
        after, captured = apply_move(board, _COLORS[letter], _pt(p))
    except IllegalMoveError as err:
        outcome = err.reason.value
        return None if outcome == fx["expect"] else f"got {outcome}, expected {fx['expect']}"
    if fx["expect"] != "ok":
        return f"move accepted, expected {fx['expect']}"
    want = Board.from_diagram(fx["after"], _pt(fx.get("ko_after")))
    if after != want:
        return f"board after move differs:\n{after.diagram()}\nko={after.ko_point}"
    if captured != [tuple(c) for c in fx["captured"]]:
        return f"captured {captured} != {fx['captured']}"
    return None


def check_prng() -> list[str]:
    failures = []
    for seed, expected in SPLITMIX_VECTORS.items():
        rng = SplitMix64(seed)
        got = [rng.next_u64() for _ in expected]
        if got != expected:
            failures.append(f"prng: seed {seed} gives {got}, expected {expected}")
    return failures


def check_rules(path=None) -> list[str]:
    failures = []
    for fx in load_fixtures(path):
        try:
            msg = run_fixture(fx)
        except Exception as err:  # a corrupt fixture must be reported, not crash the run
            msg = f"{type(err).__name__}: {err}"
        if msg is not None:
            failures.append(f"rules fixture {fx.get('name', '?')}: {msg}")
    return failures


def check_nash(count: int = 40, seed: int = 7) -> list[str]:
    failures = []
    gen = np.random.default_rng(seed)
    for t in range(count):
        k = int(gen.integers(2, 8))
        A = gen.random((k, k))
        eq = solve_nash(A)
        _, _, v = support_enumeration(A)
        if abs(eq.value - v) > 1e-6 or not eq.converged:
            failures.append(f"nash: matrix #{t} value {eq.value} vs oracle {v}, gap {eq.duality_gap}")
    eq = solve_nash([[1.0, 0.0], [0.0, 1.0]])
    if abs(eq.value - 0.5) > 1e-9:
        failures.append(f"nash: matching pennies value {eq.value}")
    if not np.allclose(sparsify([0.6, 0.3, 0.1], 0.5), [2 / 3, 1 / 3, 0.0], atol=1e-12):
        failures.append("sparsify: strict-threshold case")
    return failures


def run_selfcheck(fixtures=None) -> list[str]:
    return check_prng() + check_rules(fixtures) + check_nash()

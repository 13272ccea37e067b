import pytest

from rsportfolio.player import McConfig
from rsportfolio.seedmatrix import MatchupConfig

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def tiny_matchup():
    """5x5 games with few playouts: fast but still a real phantom game."""
    return MatchupConfig(board_size=5, mc=McConfig(playouts_per_move=4), K=3, base_seed=11)


@pytest.fixture
def criterion():
    """Record an acceptance verdict; the lines are repeated in the terminal summary."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        _ACCEPTANCE.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

import pytest

from rsportfolio.go import Board, Color, Score
from rsportfolio.prng import SplitMix64
from rsportfolio.referee import (
    Accepted, GameNotOverError, GameOver, Illegal, OpponentMoved, Referee, StonesLost, format_result,
    parse_transcript, replay_transcript,
)

B, W = Color.BLACK, Color.WHITE


def play(ref, *moves):
    """Alternate accepted moves starting with whoever is to move."""
    for m in moves:
        reply = ref.propose(ref.to_move, m)
        assert not isinstance(reply, Illegal), m
    return ref


def random_game(size, seed, pass_one_in=12):
    """Referee driven by random proposals; returns the finished referee and the proposals made."""
    rng = SplitMix64(seed)
    ref = Referee(size)
    proposals = {B: [], W: []}
    while ref.over is None:
        c = ref.to_move
        if rng.uniform_below(pass_one_in) == 0:
            move = None
        else:
            move = divmod(rng.uniform_below(size * size), size)
        proposals[c].append(move)
        ref.propose(c, move)
    return ref, proposals


def test_first_move_accepted():
    ref = Referee(5)
    assert ref.propose(B, (2, 2)) == Accepted((2, 2), ())
    assert ref.to_move == W


def test_hidden_stone_is_illegal_and_turn_stays():
    ref = play(Referee(5), (0, 0), (2, 2))
    assert ref.propose(B, (2, 2)) == Illegal((2, 2))
    assert ref.to_move == B
    assert ref.board[2, 2] == W


def test_repeated_illegal_is_idempotent():
    ref = play(Referee(5), (0, 0), (2, 2))
    before = ref.board
    assert ref.propose(B, (2, 2)) == ref.propose(B, (2, 2)) == Illegal((2, 2))
    assert ref.board == before
    assert ref.transcript[-2:] == ["B (2,2) ILLEGAL", "B (2,2) ILLEGAL"]


def test_two_passes_end_the_game():
    ref = play(Referee(5), (2, 2), None)
    over = ref.propose(B, None)
    assert isinstance(over, GameOver)
    assert over.score == Score(25, 0)
    assert over.winner == B and over.margin == 17.5
    assert ref.transcript[-1] == "RESULT B+17.5"
    assert ref.messages[W][-1] == over


def test_pass_then_move_resets_pass_count():
    ref = play(Referee(5), None, (1, 1), None)
    assert ref.over is None


def test_out_of_turn_is_an_error():
    with pytest.raises(RuntimeError):
        Referee(5).propose(W, (0, 0))


def test_no_moves_after_game_over():
    ref = play(Referee(3), None, None)
    with pytest.raises(RuntimeError):
        ref.propose(B, (0, 0))


def test_result_before_end():
    with pytest.raises(GameNotOverError):
        Referee(5).result()


def test_result_against_komi():
    # Black walls off three columns, White two: B+5 before komi
    ref = Referee(5)
    play(ref, (0, 2), (0, 3), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3),
         (0, 1), None, None)
    assert ref.over.score == Score(15, 10)
    assert ref.result() == W
    assert ref.result(komi=4.5) == B
    assert ref.result(komi=5.5) == W


def test_move_cap_ends_game():
    ref = Referee(5, move_cap=3)
    play(ref, (0, 0), None)
    over = ref.propose(B, (4, 4))
    assert isinstance(over, GameOver) and ref.capped


def test_capture_notifications():
    ref = play(Referee(5), (0, 1), (0, 0))
    reply = ref.propose(B, (1, 0))
    assert reply == Accepted((1, 0), ((0, 0),))
    assert ref.messages[W][-2:] == [OpponentMoved(passed=False), StonesLost(((0, 0),))]


@pytest.mark.parametrize("margin,text", [(12.5, "RESULT B+12.5"), (-0.5, "RESULT W+0.5"), (-7.5, "RESULT W+7.5")])
def test_format_result(margin, text):
    assert format_result(margin) == text


def test_transcript_lines():
    ref = play(Referee(5), (0, 1), (0, 0))
    ref.propose(B, (0, 0))
    play(ref, (1, 0), None, None)
    assert ref.transcript == [
        "B (0,1) OK cap=[]",
        "W (0,0) OK cap=[]",
        "B (0,0) ILLEGAL",
        "B (1,0) OK cap=[(0,0)]",
        "W pass OK",
        "B pass OK",
        "RESULT B+17.5",
    ]


@pytest.mark.parametrize("seed", range(10))
def test_replay_reproduces_random_games(seed):
    ref, _ = random_game(5, seed)
    again = replay_transcript(ref.transcript, 5)
    assert again.board == ref.board
    assert again.transcript == ref.transcript


def test_replay_rejects_tampering():
    ref = play(Referee(5), (0, 1), (0, 0), (1, 0), None, None)
    bad = [ln.replace("cap=[(0,0)]", "cap=[]") for ln in ref.transcript]
    with pytest.raises(ValueError):
        replay_transcript(bad, 5)
    with pytest.raises(ValueError):
        replay_transcript(ref.transcript[:-1] + ["RESULT W+3.5"], 5)
    with pytest.raises(ValueError):
        parse_transcript(["B 2,2 OK"])


def test_illegal_is_told_only_to_the_mover():
    ref = play(Referee(5), (0, 0), (2, 2))
    n_white = len(ref.messages[W])
    ref.propose(B, (2, 2))
    assert len(ref.messages[W]) == n_white
    assert ref.messages[B][-1] == Illegal((2, 2))


def leaked_points(ref, proposals, color):
    """Coordinates in ``color``'s messages that it could not know on its own."""
    own_proposals = set(proposals[color])
    leaks = []
    for event in ref.messages[color]:
        if isinstance(event, (Accepted, Illegal)):
            if event.move not in own_proposals:
                leaks.append(event.move)
        elif isinstance(event, OpponentMoved):
            assert set(vars(event)) == {"passed"}
        elif not isinstance(event, (StonesLost, GameOver)):
            leaks.append(event)
    return leaks


def test_hygiene_on_random_games():
    for seed in range(30):
        ref, proposals = random_game(5, 100 + seed)
        for c in Color:
            assert leaked_points(ref, proposals, c) == []
            stones_held = set()
            for event in ref.messages[c]:
                if isinstance(event, Accepted) and event.move is not None:
                    stones_held.add(event.move)
                elif isinstance(event, StonesLost):
                    # removals only ever name our own stones
                    assert set(event.points) <= stones_held
                    stones_held -= set(event.points)

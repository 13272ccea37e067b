"""
One seeded Phantom Go game
==========================

A fixed seed turns the Monte Carlo player into a deterministic policy: the
same pair of seeds always produces the same game. The referee holds the
true board; each player only sees its own stones, the moves the referee
rejected, and the stones it lost.
"""

from rsportfolio.go import Color
from rsportfolio.player import McConfig
from rsportfolio.referee import replay_transcript
from rsportfolio.seedmatrix import MatchupConfig, play_seeded_game

cfg = MatchupConfig(board_size=5, mc=McConfig(playouts_per_move=20), K=2, base_seed=1)

game = play_seeded_game(3, 7, cfg, keep_messages=True)
print("\n".join(game.transcript))
print("Black wins" if game.outcome else "White wins", "| capped:", game.capped)

# %%
# Illegal replies are how a player learns where the hidden stones are.
for color in Color:
    illegal = sum(type(e).__name__ == "Illegal" for e in game.messages[color])
    print(f"{color.name} was told of {illegal} illegal proposals")

# %%
# Replaying the game gives the identical transcript, and the referee's
# rulings can be re-checked from the transcript alone.
assert play_seeded_game(3, 7, cfg).transcript == game.transcript
final = replay_transcript(game.transcript, cfg.board_size, cfg.komi)
print(final.board.diagram())

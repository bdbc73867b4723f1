"""Replay a bundled game's walkthrough and print the transcript.

Shows the core loop: reset, step, reward accounting, and the transcript
block format. The walkthrough is also what `textquest verify` replays.
"""

from textquest import Environment, Handicaps, load_bundled
from textquest.env import format_transcript_block

game = load_bundled("mailhouse")
env = Environment(game, Handicaps(fixed_seed=True))
obs, info = env.reset(seed=0)

print(f"== {game.title} (max score {game.max_score}) ==")
print(obs.narrative)
print()

for t, command in enumerate(game.walkthrough, start=1):
    result = env.step(command)
    print(format_transcript_block(t, result.observation, command,
                                  result.reward, result.score, result.done))
    print()

assert env.score == game.max_score
print(f"finished with {env.score}/{game.max_score} in {env.moves} moves")

"""Benchmark aggregation: normalized completion.

Runs the random-agent floor over every bundled game, then reproduces
the published aggregate figures from the embedded 33-game reference
table under both negative-score conventions.
"""

from textquest import bundled_game_names, load_bundled
from textquest.bench import (compute_normalized_completion, reference_column,
                             run_benchmark)

games = {name: load_bundled(name) for name in bundled_game_names()}
report = run_benchmark(games, seed=2024, episodes=10)
print("random agent over the bundled games:")
for row in report.rows:
    print(f"  {row.game:14s} {row.mean_score:5.2f} +/- {row.std_score:4.2f} "
          f"of {row.max_score}  handicaps={','.join(row.handicaps)}")
print(f"  normalized completion: {report.normalized_completion():.1f}%\n")

print("embedded reference table (33 games), aggregated:")
for agent in ("random", "nail", "tdqn", "drrn"):
    col = reference_column(agent)
    clip = compute_normalized_completion(col, "clip")
    raw = compute_normalized_completion(col, "raw")
    print(f"  {agent:7s} clip {clip:6.2f}%   raw {raw:6.2f}%")

"""Snapshots, canonical hashing, and bit-exact determinism.

A snapshot taken mid-episode restores to a state that continues
identically. Two environments driven by the same seed and commands
stay byte-for-byte in lockstep.
"""

from textquest import Environment, Handicaps, load_bundled

HANDICAPS = Handicaps(fixed_seed=True, load_save=True)
game = load_bundled("brasskey")

# mid-episode save / load
env = Environment(game, HANDICAPS)
env.reset(seed=42)
env.step("take key")
env.step("north")
snap = env.save()
mark = env.state_hash()

continuation_a = [env.step(c).observation
                  for c in ("unlock chest with key", "open chest",
                            "take jewel")]
env.load(snap)
assert env.state_hash() == mark, "restore must reproduce the exact state"
continuation_b = [env.step(c).observation
                  for c in ("unlock chest with key", "open chest",
                            "take jewel")]
assert continuation_a == continuation_b
print("restored continuation is identical:")
for line in continuation_a:
    print(f"  {line}")

# two seeded runs in lockstep
env1 = Environment(game, HANDICAPS)
env2 = Environment(game, HANDICAPS)
env1.reset(seed=7)
env2.reset(seed=7)
for command in game.walkthrough:
    r1, r2 = env1.step(command), env2.step(command)
    assert (r1.observation, r1.score) == (r2.observation, r2.score)
assert env1.state.snapshot().data == env2.state.snapshot().data
print(f"\ntwo seed-7 runs ended byte-identical at score "
      f"{env1.score}/{game.max_score}")

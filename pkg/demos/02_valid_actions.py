"""Valid-action detection, and the tree-channel blind spot.

Every template filling is probed against a scratch copy of the state;
candidates that change the object tree are the valid set. Probing never
perturbs the live episode (the state hash proves it). The bell shows
the deliberate limitation: ringing it only flips a global counter, so
the tree-channel detector misses it while the exact detector does not.
"""

from textquest import (Environment, Handicaps, load_bundled, world_changed,
                       world_changed_exact)
import textquest.engine as engine

game = load_bundled("mailhouse")
env = Environment(game, Handicaps(True, True, True, True, True))
env.reset(seed=0)

before_hash = env.state_hash()
valid = env.identify_valid_actions()
print("valid actions at the porch:")
for cand, diff_hash in zip(valid.candidates, valid.diff_hashes):
    print(f"  {cand.surface:24s} diff {diff_hash:016x}")
assert env.state_hash() == before_hash, "probing must not touch the episode"
print(f"state hash unchanged across probing: {before_hash:016x}")
print()

before = env.state
result = engine.execute(before, game, "ring bell")
after = result.state
print(f'"ring bell" -> {result.observation}')
print(f"  world_changed (tree channel):  {world_changed(before, after)}")
print(f"  world_changed_exact:           {world_changed_exact(before, after)}")
assert not world_changed(before, after)
assert world_changed_exact(before, after)
print("  the tree detector misses global-only effects by design")

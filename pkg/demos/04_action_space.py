"""Template action spaces and why they matter.

A game exposing |T| templates over an n-word vocabulary has at most
|T| * n^2 assemblable commands (every template treated as two-blank),
versus n^4 for a free-form four-word parser. The gap is what makes
template-conditioned agents tractable.
"""

from textquest import load_bundled
from textquest.grammar import (action_space_size, enumerate_candidates,
                               free_form_space_size,
                               template_space_upper_bound)

game = load_bundled("packrat")
templates = game.templates()
vocab = game.vocabulary()

print(f"{game.title}: {len(templates)} templates, {len(vocab)} words")
exact = action_space_size(templates, len(vocab))
bound = template_space_upper_bound(len(templates), len(vocab))
free = free_form_space_size(len(vocab), 4)
print(f"  exact template fillings:  {exact:,}")
print(f"  all-two-blank bound:      {bound:,}")
print(f"  free-form 4-word space:   {free:,}")
print(f"  reduction vs free-form:   {free // bound:,}x\n")

# published-scale figures
print("at the scale of a large commercial game (237 templates, 697 words):")
print(f"  bound = {template_space_upper_bound(237, 697):,}")
print(f"  free-form = {free_form_space_size(700, 4):,}")
print()

objects = ["crowbar", "crate", "safe"]
print(f"candidates over objects {objects}:")
for cand in list(enumerate_candidates(templates, objects))[:12]:
    print(f"  {cand.surface}")
print("  ...")

"""textquest: interactive-fiction learning environments and desk-scale agents.

The package has three layers:

* a deterministic world engine (object forest, snapshots, diffs, a declarative
  grammar of verb rules, scoring);
* an episode environment that exposes template action spaces, valid-action
  identification, and explicit handicap gating;
* numpy agents (a choice-ranking Q network and a template-decomposed Q
  network, plus a canonical random baseline) with a training and benchmark
  harness.
"""

from .env import (AugmentedObservation, CapabilityError, Environment,
                  EpisodeDoneError, Handicaps, NO_HANDICAPS, StepResult,
                  ValidActionSet, verify_walkthrough, world_changed,
                  world_changed_exact)
from .gamedefs import (GameDef, GameFileError, GameValidationError, ScoreRule,
                       bundled_game_names, load_bundled, load_game, save_game,
                       serialize_game, validate)
from .grammar import (ActionCandidate, GrammarRule, ParseKind, Template,
                      Vocabulary, action_space_size, enumerate_candidates,
                      extract_templates, fill_template, free_form_space_size,
                      template_space_upper_bound)
from .world import (Diff, ObjectNode, Snapshot, SnapshotError, TreeError,
                    WorldObjectTree, WorldState, reparent, state_diff)

__version__ = "0.1.0"

__all__ = [
    "ActionCandidate", "AugmentedObservation", "CapabilityError", "Diff",
    "Environment", "EpisodeDoneError", "GameDef", "GameFileError",
    "GameValidationError", "GrammarRule", "Handicaps", "NO_HANDICAPS",
    "ObjectNode", "ParseKind", "ScoreRule", "Snapshot", "SnapshotError",
    "StepResult", "Template", "TreeError", "ValidActionSet", "Vocabulary",
    "WorldObjectTree", "WorldState", "action_space_size",
    "bundled_game_names", "enumerate_candidates", "extract_templates",
    "fill_template", "free_form_space_size", "load_bundled", "load_game",
    "reparent", "save_game", "serialize_game", "state_diff",
    "template_space_upper_bound", "validate", "verify_walkthrough",
    "world_changed", "world_changed_exact", "__version__",
]

"""Shared fixtures: small programmatic games exercising specific mechanics.

Games are built as plain dicts and run through parse_game so every
fixture also exercises the decoder and validator.
"""

from __future__ import annotations

import copy

import pytest

from textquest.gamedefs import parse_game

# One room, a closed box holding an egg, a pebble on the floor, and a
# gong whose only effect is a global counter (the tree-channel blind
# spot). No scoring beyond taking the egg.
TINYBOX = {
    "format_version": 1,
    "title": "tinybox",
    "intro_text": "A bare room with a box.",
    "max_score": 2,
    "start_room": 1,
    "objects": [
        {"id": 1, "names": ["room"], "kind": "room",
         "text": "Four walls."},
        {"id": 10, "names": ["player"], "kind": "player", "parent": 1,
         "text": "You."},
        {"id": 11, "names": ["box", "crate"], "kind": "item", "parent": 1,
         "attributes": ["container", "openable", "fixed"],
         "text": "A pine box."},
        {"id": 12, "names": ["egg"], "kind": "item", "parent": 11,
         "attributes": ["takeable"], "text": "A speckled egg."},
        {"id": 13, "names": ["pebble"], "kind": "item", "parent": 1,
         "attributes": ["takeable"], "text": "A gray pebble."},
        {"id": 14, "names": ["gong"], "kind": "item", "parent": 1,
         "attributes": ["fixed"], "text": "A brass gong."},
    ],
    "exits": {},
    "grammar": [
        {"id": "look", "pattern": "look",
         "effect": {"kind": "emit-text", "source": "room"}},
        {"id": "inventory", "pattern": "inventory",
         "effect": {"kind": "emit-text", "source": "inventory"}},
        {"id": "open", "pattern": "open OBJ",
         "preconditions": [{"kind": "has_attr", "slot": 1,
                            "attr": "openable"},
                           {"kind": "lacks_attr", "slot": 1,
                            "attr": "open"}],
         "effect": {"kind": "set-attribute", "slot": 1, "attr": "open"}},
        {"id": "close", "pattern": "close OBJ",
         "preconditions": [{"kind": "has_attr", "slot": 1, "attr": "open"}],
         "effect": {"kind": "clear-attribute", "slot": 1, "attr": "open"}},
        {"id": "take", "pattern": "take OBJ",
         "effect": {"kind": "reparent-to-player", "slot": 1}},
        {"id": "drop", "pattern": "drop OBJ",
         "effect": {"kind": "reparent-to-floor", "slot": 1}},
        {"id": "put", "pattern": "put OBJ in OBJ",
         "effect": {"kind": "put-in", "slot": 1, "slot2": 2}},
        {"id": "strike", "pattern": "strike OBJ",
         "preconditions": [{"kind": "in_room", "slot": 1}],
         "effect": {"kind": "set-global", "name": "gong_strikes", "value": 1,
                    "add": True},
         "text": "Bonnng."},
    ],
    "score_rules": [
        {"trigger": {"kind": "acquire", "obj": 12}, "points": 2,
         "once": True, "ends": True},
    ],
    "walkthrough": ["open box", "take egg"],
}


def tinybox_dict() -> dict:
    return copy.deepcopy(TINYBOX)


@pytest.fixture
def tinybox_data():
    return tinybox_dict()


@pytest.fixture
def tinybox():
    return parse_game(tinybox_dict())


@pytest.fixture
def tinybox_factory():
    """Callable returning a fresh mutable copy of the tinybox dict."""
    return tinybox_dict

"""Game definitions: the static description a game file deserializes into.

A GameDef is immutable and shared; episode state lives in WorldState. The
JSON schema is documented in docs/game-format.md and enforced by validate(),
which raises on structural errors and returns a list of advisory warnings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from . import grammar as gr
from .world import ATTRIBUTES, KINDS, ObjectNode, ROOT_ID

FORMAT_VERSION = 1

TRAITS = ("darkness", "inventory_limit", "lock_and_key", "sparse_reward")

TRIGGER_KINDS = ("enter_room", "acquire", "state_reached", "action_pattern")

CONDITION_KINDS = ("has_attr", "lacks_attr", "parent_is", "global_is",
                   "global_ge", "player_in")


class GameFileError(Exception):
    """A game file could not be read or decoded."""


class GameValidationError(Exception):
    """A game definition violates the schema; `problems` lists every issue."""

    def __init__(self, problems: list[str]) -> None:
        super().__init__("invalid game definition:\n  " +
                         "\n  ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class Exit:
    """One directed passage. `requires_open` names a door object that must
    carry the open attribute before the passage can be used."""

    to: int
    requires_open: int | None = None


@dataclass(frozen=True)
class Condition:
    kind: str
    obj: int | None = None
    attr: str | None = None
    parent: int | None = None
    name: str | None = None
    value: int | None = None
    room: int | None = None


@dataclass(frozen=True)
class Trigger:
    kind: str
    room: int | None = None
    obj: int | None = None
    rule: str | None = None
    conditions: tuple[Condition, ...] = ()


@dataclass(frozen=True)
class ScoreRule:
    """Points awarded when the trigger's condition becomes true.

    Triggers are edge-triggered: they fire on the step where the condition
    transitions from false to true. `once` rules latch through a reserved
    global so they never re-fire. `ends` latches done.
    """

    trigger: Trigger
    points: int
    once: bool = True
    ends: bool = False


@dataclass(frozen=True)
class GameDef:
    title: str
    objects: tuple[ObjectNode, ...]
    parents: dict[int, int]
    exits: dict[int, dict[str, Exit]]
    grammar: tuple[gr.GrammarRule, ...]
    score_rules: tuple[ScoreRule, ...]
    max_score: int
    start_room: int
    intro_text: str = ""
    dark_rooms: frozenset[int] = frozenset()
    inventory_limit: int | None = None
    traits: frozenset[str] = frozenset()
    walkthrough: tuple[str, ...] = ()
    expected_template_count: int | None = None
    format_version: int = FORMAT_VERSION

    def templates(self) -> tuple[gr.Template, ...]:
        return gr.extract_templates(self.grammar)

    def vocabulary(self) -> gr.Vocabulary:
        names = [n for obj in self.objects for n in obj.names]
        return gr.build_vocabulary(self.grammar, names)

    def object_map(self) -> dict[int, ObjectNode]:
        return {o.id: o for o in self.objects}

    def player_id(self) -> int:
        for obj in self.objects:
            if obj.kind == "player":
                return obj.id
        raise GameValidationError(["game has no player object"])


# -- JSON decoding ------------------------------------------------------------


def _require(data: dict, key: str, path: str):
    if key not in data:
        raise GameFileError(f"{path}: missing required field '{key}'")
    return data[key]


def _decode_object(data: dict, path: str) -> tuple[ObjectNode, int | None]:
    node = ObjectNode(
        id=_require(data, "id", path),
        names=tuple(_require(data, "names", path)),
        kind=_require(data, "kind", path),
        attributes=set(data.get("attributes", ())),
        key_id=data.get("key_id"),
        capacity=data.get("capacity"),
        text=data.get("text", ""),
        read_text=data.get("read_text"),
    )
    return node, data.get("parent")


def _decode_effect(data: dict, path: str) -> gr.Effect:
    kind = _require(data, "kind", path)
    known = {f.name for f in fields(gr.Effect)}
    extra = set(data) - known
    if extra:
        raise GameFileError(f"{path}: unknown effect field(s) {sorted(extra)}")
    return gr.Effect(**data)


def _decode_precondition(data: dict, path: str) -> gr.Precondition:
    known = {f.name for f in fields(gr.Precondition)}
    extra = set(data) - known
    if extra:
        raise GameFileError(
            f"{path}: unknown precondition field(s) {sorted(extra)}")
    _require(data, "kind", path)
    return gr.Precondition(**data)


def _decode_rule(data: dict, path: str) -> gr.GrammarRule:
    return gr.GrammarRule(
        id=_require(data, "id", path),
        pattern=_require(data, "pattern", path),
        effect=_decode_effect(_require(data, "effect", path),
                              f"{path}.effect"),
        preconditions=tuple(
            _decode_precondition(p, f"{path}.preconditions[{i}]")
            for i, p in enumerate(data.get("preconditions", ()))),
        text=data.get("text"),
        failure_text=data.get("failure_text"),
    )


def _decode_condition(data: dict, path: str) -> Condition:
    known = {f.name for f in fields(Condition)}
    extra = set(data) - known
    if extra:
        raise GameFileError(
            f"{path}: unknown condition field(s) {sorted(extra)}")
    _require(data, "kind", path)
    return Condition(**data)


def _decode_score_rule(data: dict, path: str) -> ScoreRule:
    tdata = dict(_require(data, "trigger", path))
    conditions = tuple(
        _decode_condition(c, f"{path}.trigger.conditions[{i}]")
        for i, c in enumerate(tdata.pop("conditions", ())))
    known = {f.name for f in fields(Trigger)} - {"conditions"}
    extra = set(tdata) - known
    if extra:
        raise GameFileError(f"{path}.trigger: unknown field(s) {sorted(extra)}")
    _require(tdata, "kind", f"{path}.trigger")
    return ScoreRule(
        trigger=Trigger(conditions=conditions, **tdata),
        points=_require(data, "points", path),
        once=data.get("once", True),
        ends=data.get("ends", False),
    )


def _decode_exit(value, path: str) -> Exit:
    if isinstance(value, int):
        return Exit(to=value)
    if isinstance(value, dict):
        return Exit(to=_require(value, "to", path),
                    requires_open=value.get("requires_open"))
    raise GameFileError(f"{path}: exit must be a room id or an object")


def parse_game(data: dict, source: str = "<data>") -> GameDef:
    """Decode a JSON object into a GameDef and validate it."""
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise GameFileError(
            f"{source}: unsupported format_version {version} "
            f"(this build reads version {FORMAT_VERSION})")
    objects = []
    parents: dict[int, int] = {}
    for i, odata in enumerate(data.get("objects", ())):
        node, parent = _decode_object(odata, f"{source}:objects[{i}]")
        objects.append(node)
        if parent is not None:
            parents[node.id] = parent
    exits: dict[int, dict[str, Exit]] = {}
    for room_key, table in data.get("exits", {}).items():
        room = int(room_key)
        exits[room] = {
            direction: _decode_exit(v, f"{source}:exits[{room_key}].{direction}")
            for direction, v in table.items()}
    game = GameDef(
        title=_require(data, "title", source),
        objects=tuple(objects),
        parents=parents,
        exits=exits,
        grammar=tuple(
            _decode_rule(r, f"{source}:grammar[{i}]")
            for i, r in enumerate(data.get("grammar", ()))),
        score_rules=tuple(
            _decode_score_rule(s, f"{source}:score_rules[{i}]")
            for i, s in enumerate(data.get("score_rules", ()))),
        max_score=_require(data, "max_score", source),
        start_room=_require(data, "start_room", source),
        intro_text=data.get("intro_text", ""),
        dark_rooms=frozenset(data.get("dark_rooms", ())),
        inventory_limit=data.get("inventory_limit"),
        traits=frozenset(data.get("traits", ())),
        walkthrough=tuple(data.get("walkthrough", ())),
        expected_template_count=data.get("expected_template_count"),
    )
    validate(game)
    return game


def load_game(path: str | Path) -> GameDef:
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as err:
        raise GameFileError(f"cannot read game file {path}: {err}") from err
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise GameFileError(
            f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    if not isinstance(data, dict):
        raise GameFileError(f"{path}: top level must be a JSON object")
    return parse_game(data, source=str(path))


# -- serialization -------------------------------------------------------------


def _clean(data: dict) -> dict:
    return {k: v for k, v in data.items() if v is not None}


def serialize_game(game: GameDef) -> dict:
    """GameDef back to schema JSON. load(serialize(g)) == g."""
    objects = []
    for obj in sorted(game.objects, key=lambda o: o.id):
        entry = _clean({
            "id": obj.id,
            "names": list(obj.names),
            "kind": obj.kind,
            "attributes": sorted(obj.attributes) or None,
            "parent": game.parents.get(obj.id),
            "key_id": obj.key_id,
            "capacity": obj.capacity,
            "text": obj.text or None,
            "read_text": obj.read_text,
        })
        objects.append(entry)
    exits = {}
    for room in sorted(game.exits):
        table = {}
        for direction, ex in sorted(game.exits[room].items()):
            if ex.requires_open is None:
                table[direction] = ex.to
            else:
                table[direction] = {"to": ex.to,
                                    "requires_open": ex.requires_open}
        exits[str(room)] = table
    rules = []
    for rule in game.grammar:
        rules.append(_clean({
            "id": rule.id,
            "pattern": rule.pattern,
            "effect": _clean({
                f.name: getattr(rule.effect, f.name)
                for f in fields(gr.Effect)
                if getattr(rule.effect, f.name) not in (None, False)}),
            "preconditions": [
                _clean({f.name: getattr(p, f.name)
                        for f in fields(gr.Precondition)})
                for p in rule.preconditions] or None,
            "text": rule.text,
            "failure_text": rule.failure_text,
        }))
    score_rules = []
    for sr in game.score_rules:
        trigger = _clean({
            "kind": sr.trigger.kind,
            "room": sr.trigger.room,
            "obj": sr.trigger.obj,
            "rule": sr.trigger.rule,
            "conditions": [
                _clean({f.name: getattr(c, f.name) for f in fields(Condition)})
                for c in sr.trigger.conditions] or None,
        })
        entry = {"trigger": trigger, "points": sr.points}
        if not sr.once:
            entry["once"] = False
        if sr.ends:
            entry["ends"] = True
        score_rules.append(entry)
    return _clean({
        "format_version": game.format_version,
        "title": game.title,
        "intro_text": game.intro_text,
        "max_score": game.max_score,
        "start_room": game.start_room,
        "inventory_limit": game.inventory_limit,
        "dark_rooms": sorted(game.dark_rooms) or None,
        "traits": sorted(game.traits) or None,
        "expected_template_count": game.expected_template_count,
        "objects": objects,
        "exits": exits,
        "grammar": rules,
        "score_rules": score_rules or None,
        "walkthrough": list(game.walkthrough) or None,
    })


def save_game(game: GameDef, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(serialize_game(game), indent=2, sort_keys=False) + "\n",
        encoding="utf-8")


# -- validation ----------------------------------------------------------------


def _slot_ok(slot: int | None, blanks: int) -> bool:
    return slot is None or 1 <= slot <= blanks


def validate(game: GameDef) -> list[str]:
    """Full structural check. Raises GameValidationError listing every hard
    error; returns advisory warnings (an empty list means a clean game)."""
    errors: list[str] = []
    warnings: list[str] = []
    by_id: dict[int, ObjectNode] = {}

    for obj in game.objects:
        path = f"objects[{obj.id}]"
        if obj.id == ROOT_ID:
            errors.append(f"{path}: id {ROOT_ID} is reserved for the root")
        if obj.id in by_id:
            errors.append(f"{path}: duplicate id")
        by_id[obj.id] = obj
        if obj.kind not in KINDS:
            errors.append(f"{path}: unknown kind '{obj.kind}'")
        if not obj.names:
            errors.append(f"{path}: names must be non-empty")
        for name in obj.names:
            if gr.tokenize(name) != [name]:
                errors.append(
                    f"{path}: name '{name}' must be a single lowercase word")
        for attr in obj.attributes:
            if attr not in ATTRIBUTES:
                errors.append(f"{path}: unknown attribute '{attr}'")
        if "open" in obj.attributes and "openable" not in obj.attributes:
            errors.append(f"{path}: open requires openable")
        if "locked" in obj.attributes and "openable" not in obj.attributes:
            errors.append(f"{path}: locked requires openable")
        if "lit" in obj.attributes and "lightsource" not in obj.attributes:
            errors.append(f"{path}: lit requires lightsource")
        if obj.key_id is not None and obj.key_id not in {
                o.id for o in game.objects}:
            errors.append(f"{path}: key_id {obj.key_id} does not exist")
        if obj.capacity is not None and "container" not in obj.attributes:
            errors.append(f"{path}: capacity on a non-container")

    players = [o for o in game.objects if o.kind == "player"]
    if len(players) != 1:
        errors.append(f"exactly one player required, found {len(players)}")
    rooms = {o.id for o in game.objects if o.kind == "room"}
    if game.start_room not in rooms:
        errors.append(f"start_room {game.start_room} is not a room")
    if players and game.parents.get(players[0].id) != game.start_room:
        errors.append("player must start in start_room")

    for obj_id, parent in game.parents.items():
        if obj_id not in by_id:
            errors.append(f"parents: unknown object {obj_id}")
        elif parent not in by_id:
            errors.append(f"objects[{obj_id}]: parent {parent} does not exist")
        elif by_id[obj_id].kind == "room":
            errors.append(f"objects[{obj_id}]: rooms cannot have a parent")
    for obj in game.objects:
        if obj.kind != "room" and obj.id not in game.parents:
            errors.append(f"objects[{obj.id}]: non-room needs a parent")

    for room, table in game.exits.items():
        if room not in rooms:
            errors.append(f"exits[{room}]: not a room")
        for direction, ex in table.items():
            path = f"exits[{room}].{direction}"
            if ex.to not in rooms:
                errors.append(f"{path}: destination {ex.to} is not a room")
            if ex.requires_open is not None:
                door = by_id.get(ex.requires_open)
                if door is None:
                    errors.append(f"{path}: door {ex.requires_open} missing")
                elif "openable" not in door.attributes:
                    errors.append(f"{path}: door {door.id} is not openable")

    rule_ids = set()
    for i, rule in enumerate(game.grammar):
        path = f"grammar[{i}] ('{rule.id}')"
        if rule.id in rule_ids:
            errors.append(f"{path}: duplicate rule id")
        rule_ids.add(rule.id)
        tokens = rule.tokens
        if not tokens:
            errors.append(f"{path}: empty pattern")
        for token in tokens:
            if token != gr.SLOT and gr.tokenize(token) != [token]:
                errors.append(f"{path}: bad pattern token '{token}'")
        blanks = rule.blanks
        if blanks > 2:
            errors.append(f"{path}: more than two object slots")
        eff = rule.effect
        if eff.kind not in gr.EFFECT_KINDS:
            errors.append(f"{path}: unknown effect '{eff.kind}'")
        if not _slot_ok(eff.slot, blanks) or not _slot_ok(eff.slot2, blanks):
            errors.append(f"{path}: effect slot out of range")
        if eff.obj is not None and eff.obj not in by_id:
            errors.append(f"{path}: effect object {eff.obj} does not exist")
        if eff.kind == "move-player" and not eff.direction:
            errors.append(f"{path}: move-player needs a direction")
        if eff.kind in ("set-attribute", "clear-attribute"):
            if eff.attr not in ATTRIBUTES:
                errors.append(f"{path}: effect attribute '{eff.attr}' unknown")
            if eff.slot is None and eff.obj is None:
                errors.append(f"{path}: {eff.kind} needs a target")
        if eff.kind in ("unlock-with", "put-in"):
            if (eff.slot or 1) == (eff.slot2 or 2):
                errors.append(f"{path}: {eff.kind} needs two distinct slots")
        if eff.kind == "emit-text":
            if eff.source not in gr.EMIT_SOURCES:
                errors.append(f"{path}: unknown emit source '{eff.source}'")
            if eff.source == "literal" and eff.text is None:
                errors.append(f"{path}: literal emit needs text")
        if eff.kind == "set-global":
            if not eff.name:
                errors.append(f"{path}: set-global needs a name")
            elif eff.name.startswith("_"):
                errors.append(f"{path}: global '{eff.name}' uses the "
                              "reserved '_' prefix")
            if eff.value is None:
                errors.append(f"{path}: set-global needs a value")
        for j, pre in enumerate(rule.preconditions):
            ppath = f"{path}.preconditions[{j}]"
            if pre.kind not in gr.PRECONDITION_KINDS:
                errors.append(f"{ppath}: unknown precondition '{pre.kind}'")
            if not _slot_ok(pre.slot, blanks) or not _slot_ok(pre.slot2,
                                                              blanks):
                errors.append(f"{ppath}: slot out of range")
            if pre.obj is not None and pre.obj not in by_id:
                errors.append(f"{ppath}: object {pre.obj} does not exist")
            if pre.kind in ("has_attr", "lacks_attr") and \
                    pre.attr not in ATTRIBUTES:
                errors.append(f"{ppath}: unknown attribute '{pre.attr}'")
            if pre.kind == "player_in" and pre.room not in rooms:
                errors.append(f"{ppath}: room {pre.room} does not exist")

    positive_once = 0
    any_ends = False
    for i, sr in enumerate(game.score_rules):
        path = f"score_rules[{i}]"
        trig = sr.trigger
        if trig.kind not in TRIGGER_KINDS:
            errors.append(f"{path}: unknown trigger '{trig.kind}'")
        if trig.kind == "enter_room" and trig.room not in rooms:
            errors.append(f"{path}: room {trig.room} is not a room")
        if trig.kind == "acquire" and trig.obj not in by_id:
            errors.append(f"{path}: object {trig.obj} does not exist")
        if trig.kind == "action_pattern" and trig.rule not in rule_ids:
            errors.append(f"{path}: rule '{trig.rule}' does not exist")
        if trig.kind == "state_reached" and not trig.conditions:
            errors.append(f"{path}: state_reached needs conditions")
        for j, cond in enumerate(trig.conditions):
            cpath = f"{path}.conditions[{j}]"
            if cond.kind not in CONDITION_KINDS:
                errors.append(f"{cpath}: unknown condition '{cond.kind}'")
            if cond.obj is not None and cond.obj not in by_id:
                errors.append(f"{cpath}: object {cond.obj} does not exist")
            if cond.kind in ("has_attr", "lacks_attr") and \
                    cond.attr not in ATTRIBUTES:
                errors.append(f"{cpath}: unknown attribute '{cond.attr}'")
            if cond.kind == "parent_is" and cond.parent not in by_id:
                errors.append(f"{cpath}: parent {cond.parent} does not exist")
            if cond.kind == "player_in" and cond.room not in rooms:
                errors.append(f"{cpath}: room {cond.room} does not exist")
        if sr.points > 0 and not sr.once:
            errors.append(f"{path}: positive rules must be once "
                          "(score could exceed max_score)")
        if sr.points > 0 and sr.once:
            positive_once += sr.points
        if sr.ends:
            any_ends = True
    if positive_once != game.max_score:
        errors.append(
            f"max_score is {game.max_score} but positive one-shot rules sum "
            f"to {positive_once}")

    for room in game.dark_rooms:
        if room not in rooms:
            errors.append(f"dark_rooms: {room} is not a room")
    for trait in game.traits:
        if trait not in TRAITS:
            errors.append(f"traits: unknown trait '{trait}'")
    if game.inventory_limit is not None and game.inventory_limit < 1:
        errors.append("inventory_limit must be at least 1")
    if game.expected_template_count is not None:
        actual = len(game.templates())
        if actual != game.expected_template_count:
            errors.append(
                f"expected_template_count is {game.expected_template_count} "
                f"but the grammar defines {actual} templates")

    if not errors:
        # advisory checks only make sense on a structurally sound game
        if not any_ends:
            warnings.append("no score rule ends the game")
        if not game.walkthrough:
            warnings.append("no walkthrough recorded")
        if game.traits and "darkness" in game.traits and not game.dark_rooms:
            warnings.append("darkness trait with no dark rooms")
        if game.dark_rooms and "darkness" not in game.traits:
            warnings.append("dark rooms present but darkness trait missing")
        if game.inventory_limit is not None and \
                "inventory_limit" not in game.traits:
            warnings.append("inventory limit set but trait missing")
        surfaces = {t.surface for t in game.templates()}
        for needed in ("look", "inventory"):
            if needed not in surfaces:
                warnings.append(f"no '{needed}' rule; observation channels "
                                "will be degraded")
    if errors:
        raise GameValidationError(errors)
    return warnings


# -- bundled games -------------------------------------------------------------


def bundled_game_names() -> tuple[str, ...]:
    root = resources.files(__package__) / "games"
    names = [p.name.removesuffix(".game.json")
             for p in root.iterdir() if p.name.endswith(".game.json")]
    return tuple(sorted(names))


def load_bundled(name: str) -> GameDef:
    root = resources.files(__package__) / "games"
    candidate = root / f"{name}.game.json"
    try:
        raw = candidate.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as err:
        raise GameFileError(
            f"no bundled game '{name}' "
            f"(available: {', '.join(bundled_game_names())})") from err
    return parse_game(json.loads(raw), source=f"bundled:{name}")

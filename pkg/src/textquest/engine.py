"""Ground-truth simulator: parses commands, applies effects, awards score.

`execute` is pure: it never touches the input state, and the same
(state, command) pair always produces the same result. All gameplay rules
funnel through the ten effect kinds in grammar.EFFECT_KINDS plus a small set
of engine guards (you cannot open what is locked, carry past the inventory
limit, or put a box inside itself) so authored games stay declarative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gamedefs import Condition, GameDef, ScoreRule, Trigger
from .grammar import (GrammarRule, ParseKind, ParseOutcome, Precondition,
                      tokenize, SLOT)
from .world import Diff, ObjectNode, WorldState, WorldObjectTree, state_diff

MSG_UNPARSEABLE = "That's not a verb I recognise."
MSG_UNRESOLVED = "You can't see any such thing."
MSG_CANT = "You can't do that."
MSG_DARKNESS = "It is pitch black here. You can't see a thing."

# Every fixed phrase the engine can print, so text tokenizers built from a
# game definition cover engine output as well as authored text.
BUILTIN_STRINGS = (
    MSG_UNPARSEABLE,
    MSG_UNRESOLVED,
    MSG_CANT,
    MSG_DARKNESS,
    "You can't go that way.",
    "The thing is closed.",
    "There is nothing here to take.",
    "You're carrying too much already.",
    "You already have that.",
    "You can't take that.",
    "Taken.",
    "You aren't carrying that.",
    "Dropped.",
    "Nothing happens.",
    "The thing is already open.",
    "The thing is already lit.",
    "You can't open that.",
    "The thing is locked.",
    "Opening the thing reveals a thing.",
    "You open the thing.",
    "You can't light that.",
    "You turn on the thing.",
    "You turn off the thing.",
    "You close the thing.",
    "Done.",
    "The thing isn't locked.",
    "The thing doesn't fit.",
    "Nothing to unlock with.",
    "You unlock the thing with the thing.",
    "Put it in what?",
    "You can't put things in the thing.",
    "There's no more room in the thing.",
    "You can't put something inside itself.",
    "You put the thing in the thing.",
    "You see nothing special about the thing.",
    "Nothing is written on the thing.",
    "You are empty handed.",
    "You are carrying a thing.",
    "The thing contains a thing.",
    "There is a thing here.",
    "a an and",
    "[Your score has just gone up by 1 point.]",
    "[Your score has just gone down by 1 points.]",
    "*** The game has ended. ***",
)


class EngineError(Exception):
    """Internal consistency failure; authored games should never hit this."""


@dataclass(frozen=True)
class CommandResult:
    """Outcome of executing one text command against a state."""

    state: WorldState
    observation: str
    outcome: ParseOutcome
    applied: bool
    reward: int
    diff: Diff


def init_state(game: GameDef, seed: int = 0) -> WorldState:
    """Fresh episode state for a validated game."""
    nodes = [obj.copy() for obj in game.objects]
    tree = WorldObjectTree.build(nodes, dict(game.parents))
    tree.validate()
    from .rng import SplitMix64
    return WorldState(tree=tree, rng=SplitMix64(seed))


def player_id(state: WorldState) -> int:
    for obj_id, node in state.tree.nodes.items():
        if node.kind == "player":
            return obj_id
    raise EngineError("state has no player node")


def player_room(state: WorldState) -> int:
    room = state.tree.containing_room(player_id(state))
    if room is None:
        raise EngineError("player is not inside a room")
    return room


def is_dark(state: WorldState, game: GameDef, room: int | None = None) -> bool:
    """True when the room is flagged dark and no reachable light is lit.

    A lit lightsource counts if it sits in the room or anywhere in an open
    chain of containers, including everything the player carries.
    """
    if room is None:
        room = player_room(state)
    if room not in game.dark_rooms:
        return False
    tree = state.tree
    stack = tree.children(room)
    while stack:
        obj = stack.pop()
        node = tree.nodes[obj]
        if node.has("lightsource") and node.has("lit"):
            return False
        if not node.has("container") or node.has("open"):
            stack.extend(tree.children(obj))
    return True


def _collect_open(tree: WorldObjectTree, obj: int, out: list[int]) -> None:
    for child in tree.children(obj):
        node = tree.nodes[child]
        if node.kind == "player":
            continue
        out.append(child)
        if not node.has("container") or node.has("open"):
            _collect_open(tree, child, out)


def visible_objects(state: WorldState, game: GameDef) -> list[int]:
    """Objects the player can currently refer to, in ascending-id order.

    Carried things are always visible (you can feel them in the dark); room
    contents disappear when the room is dark. Closed containers hide their
    contents either way.
    """
    tree = state.tree
    player = player_id(state)
    room = player_room(state)
    out: list[int] = []
    _collect_open(tree, player, out)
    if not is_dark(state, game, room):
        for child in tree.children(room):
            if child == player:
                continue
            out.append(child)
            node = tree.nodes[child]
            if not node.has("container") or node.has("open"):
                _collect_open(tree, child, out)
    return sorted(set(out))


def extract_nouns(text: str, game: GameDef) -> list[str]:
    """Tokens of `text` that name some non-room object, sorted and unique."""
    names: set[str] = set()
    for obj in game.objects:
        if obj.kind in ("item", "scenery"):
            names.update(obj.names)
    return sorted(set(tokenize(text)) & names)


# -- parsing -------------------------------------------------------------------


def parse_command(state: WorldState, game: GameDef,
                  text: str) -> ParseOutcome:
    """Pure parser: same state and text always give the same outcome.

    Rules are tried in authored order. Among rules whose pattern matches and
    whose nouns resolve, the first whose preconditions hold wins; if none
    hold, the first resolving rule is returned (its failure text will be
    shown). A pattern match with an unknown or out-of-sight noun yields
    UNRESOLVED; no pattern match at all yields UNPARSEABLE.
    """
    words = tokenize(text)
    if not words:
        return ParseOutcome(ParseKind.UNPARSEABLE)
    name_map: dict[str, int] = {}
    for obj in visible_objects(state, game):
        for name in state.tree.nodes[obj].names:
            # lowest id wins when two visible objects share a name
            name_map.setdefault(name, obj)
    saw_pattern = False
    first_resolved: ParseOutcome | None = None
    for rule in game.grammar:
        pattern = rule.tokens
        if len(pattern) != len(words):
            continue
        bound: list[int] = []
        matched = True
        resolved = True
        for p, w in zip(pattern, words):
            if p == SLOT:
                if w in name_map:
                    bound.append(name_map[w])
                else:
                    resolved = False
            elif p != w:
                matched = False
                break
        if not matched:
            continue
        saw_pattern = True
        if not resolved:
            continue
        outcome = ParseOutcome(ParseKind.RESOLVED, rule_id=rule.id,
                               objects=tuple(bound))
        if first_resolved is None:
            first_resolved = outcome
        if check_preconditions(state, game, rule, tuple(bound))[0]:
            return outcome
    if first_resolved is not None:
        return first_resolved
    if saw_pattern:
        return ParseOutcome(ParseKind.UNRESOLVED)
    return ParseOutcome(ParseKind.UNPARSEABLE)


def _target(pre_slot: int | None, pre_obj: int | None,
            objects: tuple[int, ...], default_slot: int) -> int | None:
    if pre_obj is not None:
        return pre_obj
    slot = pre_slot if pre_slot is not None else default_slot
    if 1 <= slot <= len(objects):
        return objects[slot - 1]
    return None


def _precondition_holds(state: WorldState, game: GameDef, pre: Precondition,
                        objects: tuple[int, ...]) -> bool:
    tree = state.tree
    player = player_id(state)
    kind = pre.kind
    if kind == "not_dark":
        return not is_dark(state, game)
    if kind == "global_is":
        return state.globals.get(pre.name or "", 0) == (pre.value or 0)
    if kind == "global_ge":
        return state.globals.get(pre.name or "", 0) >= (pre.value or 0)
    if kind == "player_in":
        return player_room(state) == pre.room
    if kind == "inventory_has_room":
        limit = game.inventory_limit
        return limit is None or len(tree.children(player)) < limit
    obj = _target(pre.slot, pre.obj, objects, 1)
    if obj is None or obj not in tree.nodes:
        return False
    node = tree.nodes[obj]
    if kind == "carried":
        return tree.in_subtree(obj, player) and obj != player
    if kind == "not_carried":
        return not tree.in_subtree(obj, player)
    if kind == "in_room":
        return tree.containing_room(obj) == player_room(state) and \
            not tree.in_subtree(obj, player)
    if kind == "has_attr":
        return node.has(pre.attr or "")
    if kind == "lacks_attr":
        return not node.has(pre.attr or "")
    if kind == "visible":
        return obj in visible_objects(state, game)
    if kind == "capacity_ok":
        return node.capacity is None or \
            len(tree.children(obj)) < node.capacity
    if kind == "key_matches":
        key = _target(pre.slot2, None, objects, 2)
        return key is not None and node.key_id == key
    raise EngineError(f"unknown precondition kind '{kind}'")


def check_preconditions(state: WorldState, game: GameDef, rule: GrammarRule,
                        objects: tuple[int, ...]) -> tuple[bool, str]:
    for pre in rule.preconditions:
        if not _precondition_holds(state, game, pre, objects):
            return False, rule.failure_text or MSG_CANT
    return True, ""


# -- rendering -----------------------------------------------------------------


def _article(name: str) -> str:
    return "an" if name[:1] in "aeiou" else "a"


def _noun(node: ObjectNode) -> str:
    return f"{_article(node.name)} {node.name}"


def _listing(tree: WorldObjectTree, ids: list[int]) -> str:
    parts = [_noun(tree.nodes[i]) for i in ids]
    if len(parts) == 1:
        return parts[0]
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + f", and {parts[-1]}"


def render_room(state: WorldState, game: GameDef,
                room: int | None = None) -> str:
    """One-line room description: name, text, then notable contents."""
    if room is None:
        room = player_room(state)
    if is_dark(state, game, room):
        return MSG_DARKNESS
    tree = state.tree
    node = tree.nodes[room]
    parts = [f"{node.name.capitalize()}."]
    if node.text:
        parts.append(node.text)
    player = player_id(state)
    for child in tree.children(room):
        if child == player:
            continue
        cnode = tree.nodes[child]
        if cnode.kind == "scenery":
            continue
        parts.append(f"There is {_noun(cnode)} here.")
        if cnode.has("container") and cnode.has("open"):
            inside = tree.children(child)
            if inside:
                parts.append(
                    f"The {cnode.name} contains {_listing(tree, inside)}.")
    return " ".join(parts)


def render_inventory(state: WorldState, game: GameDef) -> str:
    tree = state.tree
    carried = tree.children(player_id(state))
    if not carried:
        return "You are empty handed."
    parts = [f"You are carrying {_listing(tree, carried)}."]
    for obj in carried:
        node = tree.nodes[obj]
        if node.has("container") and node.has("open"):
            inside = tree.children(obj)
            if inside:
                parts.append(
                    f"The {node.name} contains {_listing(tree, inside)}.")
    return " ".join(parts)


def _fmt(template: str, tree: WorldObjectTree,
         objects: tuple[int, ...]) -> str:
    out = template
    for i, obj in enumerate(objects, start=1):
        out = out.replace("{" + str(i) + "}", tree.nodes[obj].name)
    return out


# -- effects -------------------------------------------------------------------


class _Failure(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


def _apply_effect(state: WorldState, game: GameDef, rule: GrammarRule,
                  objects: tuple[int, ...]) -> str:
    """Mutates `state`; returns the success text or raises _Failure."""
    eff = rule.effect
    tree = state.tree
    player = player_id(state)
    fail_text = rule.failure_text

    def fail(default: str) -> _Failure:
        return _Failure(fail_text or default)

    def success(default: str) -> str:
        if rule.text is not None:
            return _fmt(rule.text, tree, objects)
        return default

    if eff.kind == "move-player":
        room = player_room(state)
        passage = game.exits.get(room, {}).get(eff.direction or "")
        if passage is None:
            raise fail("You can't go that way.")
        if passage.requires_open is not None:
            door = tree.nodes[passage.requires_open]
            if not door.has("open"):
                raise fail(f"The {door.name} is closed.")
        tree.reparent(player, passage.to)
        return success(render_room(state, game, passage.to))

    if eff.kind == "reparent-to-player":
        if eff.slot is None and eff.obj is None:
            # sweep: take everything takeable in sight
            limit = game.inventory_limit
            lines = []
            for obj in visible_objects(state, game):
                node = tree.nodes[obj]
                if not node.has("takeable") or tree.parent[obj] == player:
                    continue
                if limit is not None and len(tree.children(player)) >= limit:
                    lines.append("You're carrying too much already.")
                    break
                tree.reparent(obj, player)
                lines.append(f"{node.name}: Taken.")
            if not lines:
                raise fail("There is nothing here to take.")
            return success(" ".join(lines))
        target = _target(eff.slot, eff.obj, objects, 1)
        node = tree.nodes[target]
        if tree.parent[target] == player:
            raise fail("You already have that.")
        if not node.has("takeable"):
            raise fail("You can't take that.")
        limit = game.inventory_limit
        if limit is not None and len(tree.children(player)) >= limit:
            raise fail("You're carrying too much already.")
        tree.reparent(target, player)
        return success("Taken.")

    if eff.kind == "reparent-to-floor":
        target = _target(eff.slot, eff.obj, objects, 1)
        if tree.parent[target] != player:
            raise fail("You aren't carrying that.")
        tree.reparent(target, player_room(state))
        return success("Dropped.")

    if eff.kind == "set-attribute":
        target = _target(eff.slot, eff.obj, objects, 1)
        node = tree.nodes[target]
        attr = eff.attr or ""
        if node.has(attr):
            raise fail(f"The {node.name} is already {attr}." if attr in
                       ("open", "lit") else "Nothing happens.")
        if attr == "open":
            if not node.has("openable"):
                raise fail("You can't open that.")
            if node.has("locked"):
                raise fail(f"The {node.name} is locked.")
            node.attributes.add(attr)
            inside = tree.children(target)
            if inside:
                return success(f"Opening the {node.name} reveals "
                               f"{_listing(tree, inside)}.")
            return success(f"You open the {node.name}.")
        if attr == "lit" and not node.has("lightsource"):
            raise fail("You can't light that.")
        node.attributes.add(attr)
        if attr == "lit":
            return success(f"You turn on the {node.name}.")
        return success("Done.")

    if eff.kind == "clear-attribute":
        target = _target(eff.slot, eff.obj, objects, 1)
        node = tree.nodes[target]
        attr = eff.attr or ""
        if not node.has(attr):
            raise fail("Nothing happens.")
        node.attributes.discard(attr)
        if attr == "open":
            return success(f"You close the {node.name}.")
        if attr == "lit":
            return success(f"You turn off the {node.name}.")
        return success("Done.")

    if eff.kind == "unlock-with":
        target = _target(eff.slot, eff.obj, objects, 1)
        key = _target(eff.slot2, None, objects, 2)
        node = tree.nodes[target]
        if not node.has("locked"):
            raise fail(f"The {node.name} isn't locked.")
        if key is None or node.key_id != key:
            raise fail(f"The {tree.nodes[key].name} doesn't fit."
                       if key is not None else "Nothing to unlock with.")
        node.attributes.discard("locked")
        return success(f"You unlock the {node.name} with "
                       f"the {tree.nodes[key].name}.")

    if eff.kind == "put-in":
        item = _target(eff.slot, eff.obj, objects, 1)
        box = _target(eff.slot2, None, objects, 2)
        if box is None:
            raise fail("Put it in what?")
        inode, bnode = tree.nodes[item], tree.nodes[box]
        if tree.parent[item] != player:
            raise fail("You aren't carrying that.")
        if not bnode.has("container"):
            raise fail(f"You can't put things in the {bnode.name}.")
        if bnode.has("openable") and not bnode.has("open"):
            raise fail(f"The {bnode.name} is closed.")
        if bnode.capacity is not None and \
                len(tree.children(box)) >= bnode.capacity:
            raise fail(f"There's no more room in the {bnode.name}.")
        if tree.in_subtree(box, item):
            raise fail("You can't put something inside itself.")
        tree.reparent(item, box)
        return success(f"You put the {inode.name} in the {bnode.name}.")

    if eff.kind == "toggle-light":
        target = _target(eff.slot, eff.obj, objects, 1)
        node = tree.nodes[target]
        if not node.has("lightsource"):
            raise fail("You can't light that.")
        if node.has("lit"):
            node.attributes.discard("lit")
            return success(f"You turn off the {node.name}.")
        node.attributes.add("lit")
        return success(f"You turn on the {node.name}.")

    if eff.kind == "emit-text":
        if eff.source == "literal":
            return success(eff.text or "")
        if eff.source == "room":
            return success(render_room(state, game))
        if eff.source == "inventory":
            return success(render_inventory(state, game))
        target = _target(eff.slot, eff.obj, objects, 1)
        node = tree.nodes[target]
        if eff.source == "object_text":
            return success(node.text or
                           f"You see nothing special about the {node.name}.")
        if eff.source == "object_read_text":
            if node.read_text is None:
                raise fail(f"Nothing is written on the {node.name}.")
            return success(node.read_text)
        raise EngineError(f"unknown emit source '{eff.source}'")

    if eff.kind == "set-global":
        name = eff.name or ""
        old = state.globals.get(name, 0)
        state.globals[name] = old + (eff.value or 0) if eff.add \
            else (eff.value or 0)
        return success("Done.")

    raise EngineError(f"unknown effect kind '{eff.kind}'")


# -- scoring -------------------------------------------------------------------


def _condition_holds(state: WorldState, game: GameDef,
                     cond: Condition) -> bool:
    tree = state.tree
    kind = cond.kind
    if kind == "global_is":
        return state.globals.get(cond.name or "", 0) == (cond.value or 0)
    if kind == "global_ge":
        return state.globals.get(cond.name or "", 0) >= (cond.value or 0)
    if kind == "player_in":
        return player_room(state) == cond.room
    node = tree.nodes.get(cond.obj or -1)
    if node is None:
        return False
    if kind == "has_attr":
        return node.has(cond.attr or "")
    if kind == "lacks_attr":
        return not node.has(cond.attr or "")
    if kind == "parent_is":
        return tree.parent[cond.obj] == cond.parent
    raise EngineError(f"unknown condition kind '{kind}'")


def _trigger_active(state: WorldState, game: GameDef, trigger: Trigger,
                    executed_rule: str | None) -> bool:
    if trigger.kind == "enter_room":
        return player_room(state) == trigger.room
    if trigger.kind == "acquire":
        return state.tree.in_subtree(trigger.obj or -1, player_id(state))
    if trigger.kind == "state_reached":
        return all(_condition_holds(state, game, c)
                   for c in trigger.conditions)
    if trigger.kind == "action_pattern":
        return executed_rule == trigger.rule
    raise EngineError(f"unknown trigger kind '{trigger.kind}'")


def _award_score(before: WorldState, after: WorldState, game: GameDef,
                 executed_rule: str) -> list[str]:
    """Fire edge-triggered score rules; mutates `after`. Returns notices."""
    notices = []
    for idx, sr in enumerate(game.score_rules):
        latch = f"_fired:{idx}"
        if sr.once and after.globals.get(latch, 0):
            continue
        now = _trigger_active(after, game, sr.trigger, executed_rule)
        if not now:
            continue
        if sr.trigger.kind != "action_pattern" and \
                _trigger_active(before, game, sr.trigger, None):
            continue  # was already true; not an edge
        after.score += sr.points
        if sr.once:
            after.globals[latch] = 1
        if sr.ends:
            after.done = True
        if sr.points > 0:
            unit = "point" if sr.points == 1 else "points"
            notices.append(f"[Your score has just gone up by "
                           f"{sr.points} {unit}.]")
        elif sr.points < 0:
            unit = "point" if sr.points == -1 else "points"
            notices.append(f"[Your score has just gone down by "
                           f"{-sr.points} {unit}.]")
    if after.done:
        notices.append("*** The game has ended. ***")
    return notices


# -- top-level step ------------------------------------------------------------


def execute(state: WorldState, game: GameDef, text: str) -> CommandResult:
    """Run one command. Pure: returns a new state, never mutates the input.

    The moves counter increments exactly when the command is accepted, i.e.
    it parsed to a rule whose preconditions held and whose effect applied.
    Rejected commands return the input state object unchanged.
    """
    outcome = parse_command(state, game, text)
    if outcome.kind is ParseKind.UNPARSEABLE:
        return CommandResult(state, MSG_UNPARSEABLE, outcome, False, 0,
                             Diff())
    if outcome.kind is ParseKind.UNRESOLVED:
        return CommandResult(state, MSG_UNRESOLVED, outcome, False, 0, Diff())
    rule = next(r for r in game.grammar if r.id == outcome.rule_id)
    ok, message = check_preconditions(state, game, rule, outcome.objects)
    if not ok:
        return CommandResult(state, message, outcome, False, 0, Diff())
    after = state.copy()
    try:
        text_out = _apply_effect(after, game, rule, outcome.objects)
    except _Failure as failure:
        return CommandResult(state, failure.message, outcome, False, 0,
                             Diff())
    after.moves += 1
    notices = _award_score(state, after, game, rule.id)
    if notices:
        text_out = " ".join([text_out] + notices)
    return CommandResult(
        state=after,
        observation=text_out,
        outcome=outcome,
        applied=True,
        reward=after.score - state.score,
        diff=state_diff(state, after),
    )

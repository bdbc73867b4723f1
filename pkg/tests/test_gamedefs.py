"""Game-definition schema: decoding, validation, and round-trips."""

import copy
import json

import pytest

from textquest.gamedefs import (GameFileError, GameValidationError,
                                bundled_game_names, load_bundled, load_game,
                                parse_game, save_game, serialize_game,
                                validate)


# -- bundled games -------------------------------------------------------------------


def test_bundled_games_present():
    names = bundled_game_names()
    assert "mailhouse" in names
    assert len(names) >= 2


@pytest.mark.parametrize("name", bundled_game_names())
def test_bundled_games_load_clean(name):
    game = load_bundled(name)
    assert game.max_score > 0
    assert validate(game) == []  # bundled games carry no warnings
    assert game.walkthrough  # and each ships a walkthrough


def test_load_bundled_unknown_name():
    with pytest.raises(GameFileError, match="available"):
        load_bundled("no-such-game")


# -- file loading --------------------------------------------------------------------


def test_load_game_round_trip(tmp_path, tinybox):
    path = tmp_path / "tiny.game.json"
    save_game(tinybox, path)
    again = load_game(path)
    assert serialize_game(again) == serialize_game(tinybox)


def test_load_game_missing_file(tmp_path):
    with pytest.raises(GameFileError, match="cannot read"):
        load_game(tmp_path / "absent.game.json")


def test_load_game_reports_json_position(tmp_path):
    path = tmp_path / "broken.game.json"
    path.write_text('{\n  "title": "x",,\n}\n')
    with pytest.raises(GameFileError, match=r":2:\d+"):
        load_game(path)


def test_load_game_rejects_non_object(tmp_path):
    path = tmp_path / "list.game.json"
    path.write_text("[1, 2, 3]\n")
    with pytest.raises(GameFileError, match="top level"):
        load_game(path)


def test_parse_rejects_future_format_version(tinybox_data):
    data = copy.deepcopy(tinybox_data)
    data["format_version"] = 99
    with pytest.raises(GameFileError, match="format_version"):
        parse_game(data)


def test_parse_rejects_unknown_effect_field(tinybox_data):
    data = copy.deepcopy(tinybox_data)
    data["grammar"][0]["effect"]["sparkle"] = True
    with pytest.raises(GameFileError, match="sparkle"):
        parse_game(data)


def test_parse_requires_title(tinybox_data):
    data = copy.deepcopy(tinybox_data)
    del data["title"]
    with pytest.raises(GameFileError, match="title"):
        parse_game(data)


# -- validation ----------------------------------------------------------------------


def broken(tinybox_data, mutate):
    data = copy.deepcopy(tinybox_data)
    mutate(data)
    with pytest.raises(GameValidationError) as err:
        parse_game(data)
    return err.value.problems


def test_validation_collects_all_errors(tinybox_data):
    def mutate(data):
        data["objects"][2]["attributes"] = ["glowing"]   # unknown attribute
        data["objects"][3]["parent"] = 999               # missing parent
        data["start_room"] = 555                         # not a room
    problems = broken(tinybox_data, mutate)
    assert len(problems) >= 3
    text = "\n".join(problems)
    assert "glowing" in text and "999" in text and "555" in text


def test_validation_reserved_id_zero(tinybox_data):
    problems = broken(tinybox_data,
                      lambda d: d["objects"].append(
                          {"id": 0, "names": ["ghost"], "kind": "item",
                           "parent": 1}))
    assert any("reserved" in p for p in problems)


def test_validation_attribute_dependencies(tinybox_data):
    problems = broken(
        tinybox_data,
        lambda d: d["objects"][3].update(attributes=["open"]))
    assert any("openable" in p for p in problems)


def test_validation_max_score_arithmetic(tinybox_data):
    problems = broken(tinybox_data, lambda d: d.update(max_score=17))
    assert any("max_score" in p for p in problems)


def test_validation_positive_rules_must_be_once(tinybox_data):
    problems = broken(tinybox_data,
                      lambda d: d["score_rules"][0].update(once=False))
    assert any("once" in p for p in problems)


def test_validation_reserved_global_prefix(tinybox_data):
    def mutate(data):
        data["grammar"].append({
            "id": "hex", "pattern": "hex",
            "effect": {"kind": "set-global", "name": "_secret", "value": 1}})
    problems = broken(tinybox_data, mutate)
    assert any("reserved" in p for p in problems)


def test_validation_effect_slot_range(tinybox_data):
    def mutate(data):
        data["grammar"].append({
            "id": "bad", "pattern": "wave OBJ",
            "effect": {"kind": "set-attribute", "attr": "open", "slot": 2}})
    problems = broken(tinybox_data, mutate)
    assert any("slot out of range" in p for p in problems)


def test_validation_exit_door_must_be_openable(tinybox_data):
    def mutate(data):
        data["exits"] = {"1": {"north": {"to": 1, "requires_open": 13}}}
    problems = broken(tinybox_data, mutate)
    assert any("not openable" in p for p in problems)


def test_validation_template_count_pin(tinybox_data):
    problems = broken(tinybox_data,
                      lambda d: d.update(expected_template_count=3))
    assert any("expected_template_count" in p for p in problems)


def test_validation_duplicate_rule_id(tinybox_data):
    def mutate(data):
        data["grammar"].append(dict(data["grammar"][0]))
    problems = broken(tinybox_data, mutate)
    assert any("duplicate rule id" in p for p in problems)


def test_warnings_on_sound_games(tinybox_data):
    data = copy.deepcopy(tinybox_data)
    data.pop("walkthrough", None)
    game = parse_game(data)  # warnings never block parsing
    assert "no walkthrough recorded" in validate(game)


def test_warning_dark_rooms_without_trait(tinybox_data):
    data = copy.deepcopy(tinybox_data)
    data["dark_rooms"] = [1]
    game = parse_game(data)
    assert any("darkness trait" in w for w in validate(game))


# -- serialization -------------------------------------------------------------------


def test_serialize_is_json_and_stable(tinybox):
    blob = serialize_game(tinybox)
    text = json.dumps(blob, sort_keys=True)
    assert json.loads(text) == blob
    assert serialize_game(parse_game(blob)) == blob


def test_serialize_omits_empty_fields(tinybox):
    blob = serialize_game(tinybox)
    assert "dark_rooms" not in blob
    assert "inventory_limit" not in blob


def test_gamedef_helpers(tinybox):
    assert tinybox.player_id() == 10
    assert len(tinybox.object_map()) == len(tinybox.objects)
    assert tinybox.templates()
    assert len(tinybox.vocabulary()) > 0

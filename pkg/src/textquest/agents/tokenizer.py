"""Word-level tokenizer built from a game definition.

The vocabulary is the union of the grammar vocabulary (every word an agent
can emit) and every word the engine can print for the game: intro text,
object names and descriptions, rule text, failure text, and the engine's
built-in messages. Index 0 is padding, index 1 is the unknown marker, and
the rest are sorted words so the mapping is deterministic for a given game.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import engine
from ..gamedefs import GameDef
from ..grammar import tokenize

PAD = 0
UNK = 1


def _game_strings(game: GameDef) -> list[str]:
    texts = [game.title, game.intro_text]
    for obj in game.objects:
        texts.extend(obj.names)
        texts.append(obj.text)
        texts.append(obj.read_text)
    for rule in game.grammar:
        texts.append(rule.pattern)
        texts.append(rule.text)
        texts.append(rule.failure_text)
        if rule.effect.text:
            texts.append(rule.effect.text)
    for score_rule in game.score_rules:
        texts.append(str(score_rule.points))
    texts.extend(engine.BUILTIN_STRINGS)
    return [t for t in texts if t]


@dataclass(frozen=True)
class Tokenizer:
    words: tuple[str, ...]
    max_len: int = 48
    _index: dict[str, int] = field(init=False, repr=False, compare=False,
                                   default_factory=dict)

    def __post_init__(self) -> None:
        index = {w: i + 2 for i, w in enumerate(self.words)}
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_game(cls, game: GameDef, max_len: int = 48) -> "Tokenizer":
        seen: set[str] = set(game.vocabulary().words)
        for text in _game_strings(game):
            seen.update(tokenize(text))
        return cls(words=tuple(sorted(seen)), max_len=max_len)

    @property
    def vocab_size(self) -> int:
        # padding and unknown rows precede the words
        return len(self.words) + 2

    def encode(self, text: str) -> list[int]:
        ids = [self._index.get(w, UNK) for w in tokenize(text)]
        return ids[:self.max_len]

    def encode_channels(self, channels: tuple[str, str, str, str]
                        ) -> tuple[list[int], list[int], list[int], list[int]]:
        nar, inv, desc, prev = channels
        return (self.encode(nar), self.encode(inv),
                self.encode(desc), self.encode(prev))

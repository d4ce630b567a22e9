from dataclasses import dataclass, field
from typing import List

NONE_TAG = "NONE"


@dataclass
class Turn:
    """One utterance: a speaker role and its tokens with parallel POS/ENT tags."""
    role: str
    tokens: List[str]
    pos_tags: List[str]
    ent_tags: List[str]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class Meeting:
    id: str
    turns: List[Turn]
    summary: List[str] = field(default_factory=list)

    @property
    def roles(self) -> List[str]:
        return [turn.role for turn in self.turns]

    def transcript_tokens(self) -> List[str]:
        return [token for turn in self.turns for token in turn.tokens]

    def sentences(self) -> List[List[str]]:
        """Turns as sentence units (used by the extractive baselines)."""
        return [list(turn.tokens) for turn in self.turns]


@dataclass
class Article:
    source_name: str
    sentences: List[List[str]]
    summary: List[str]


def untagged_turn(role: str, tokens: List[str]) -> Turn:
    return Turn(
        role=role,
        tokens=list(tokens),
        pos_tags=[NONE_TAG] * len(tokens),
        ent_tags=[NONE_TAG] * len(tokens),
    )

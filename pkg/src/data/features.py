from dataclasses import dataclass
from typing import List

from src.data.schema import Meeting
from src.data.vocab import RoleTable, TagVocab, Vocab


@dataclass
class TurnFeatures:
    role_id: int
    token_ids: List[int]
    pos_ids: List[int]
    ent_ids: List[int]


@dataclass
class MeetingFeatures:
    """Id-level view of a meeting as consumed by the model."""
    meeting_id: str
    turns: List[TurnFeatures]
    summary_ids: List[int]


class Featurizer:
    def __init__(self, vocab: Vocab, pos_vocab: TagVocab, ent_vocab: TagVocab, roles: RoleTable):
        self.vocab = vocab
        self.pos_vocab = pos_vocab
        self.ent_vocab = ent_vocab
        self.roles = roles

    def featurize(self, meeting: Meeting) -> MeetingFeatures:
        """Map tokens, tags and roles to ids; wrap the summary in <begin>/<end>."""
        turns = [
            TurnFeatures(
                role_id=self.roles.role_id(turn.role),
                token_ids=self.vocab.encode(turn.tokens),
                pos_ids=self.pos_vocab.encode(turn.pos_tags),
                ent_ids=self.ent_vocab.encode(turn.ent_tags),
            )
            for turn in meeting.turns
        ]
        summary = [self.vocab.begin_id] + self.vocab.encode(meeting.summary) + [self.vocab.end_id]
        return MeetingFeatures(meeting_id=meeting.id, turns=turns, summary_ids=summary)

    def decode_summary(self, ids: List[int]) -> List[str]:
        """Tokens for generated ids, without <begin>/<end> markers."""
        markers = {self.vocab.begin_id, self.vocab.end_id}
        return self.vocab.decode([i for i in ids if i not in markers])

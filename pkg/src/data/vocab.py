from collections import Counter
from typing import Dict, Iterable, List, Sequence

from src.data.schema import NONE_TAG, Meeting
from src.exceptions import EmptyCorpus, IdOutOfRange, UnknownRole

PAD, UNK, BOS, BEGIN, END = "<pad>", "<unk>", "<bos>", "<begin>", "<end>"
RESERVED_TOKENS = (PAD, UNK, BOS, BEGIN, END)
# Every Vocab starts with the reserved tokens, so their ids are fixed.
PAD_ID, UNK_ID, BOS_ID, BEGIN_ID, END_ID = range(len(RESERVED_TOKENS))


class Vocab:
    """Dense token <-> id bijection; reserved tokens occupy ids 0..4."""

    def __init__(self, tokens: Sequence[str]):
        if list(tokens[:len(RESERVED_TOKENS)]) != list(RESERVED_TOKENS):
            raise ValueError("vocabulary must start with the reserved tokens")
        if len(set(tokens)) != len(tokens):
            raise ValueError("vocabulary tokens must be unique")
        self.tokens = list(tokens)
        self._index: Dict[str, int] = {token: i for i, token in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    @property
    def pad_id(self) -> int:
        return self._index[PAD]

    @property
    def unk_id(self) -> int:
        return self._index[UNK]

    @property
    def bos_id(self) -> int:
        return self._index[BOS]

    @property
    def begin_id(self) -> int:
        return self._index[BEGIN]

    @property
    def end_id(self) -> int:
        return self._index[END]

    def token_id(self, token: str) -> int:
        return self._index.get(token, self.unk_id)

    def encode(self, tokens: Iterable[str]) -> List[int]:
        return [self.token_id(token) for token in tokens]

    def decode(self, ids: Iterable[int]) -> List[str]:
        out = []
        for i in ids:
            if not 0 <= i < len(self.tokens):
                raise IdOutOfRange(f"token id {i} outside vocabulary of size {len(self.tokens)}")
            out.append(self.tokens[i])
        return out


class TagVocab:
    """POS or ENT tag <-> id mapping; unknown tags fall back to the NONE tag (id 0)."""

    def __init__(self, tags: Sequence[str]):
        if not tags or tags[0] != NONE_TAG:
            raise ValueError(f"tag vocabulary must start with {NONE_TAG}")
        self.tags = list(tags)
        self._index = {tag: i for i, tag in enumerate(self.tags)}

    def __len__(self) -> int:
        return len(self.tags)

    def encode(self, tags: Iterable[str]) -> List[int]:
        return [self._index.get(tag, 0) for tag in tags]


class RoleTable:
    """Role name <-> id; ids index rows of the role-vector table."""

    def __init__(self, roles: Sequence[str]):
        if len(set(roles)) != len(roles):
            raise ValueError("role names must be unique")
        self.roles = list(roles)
        self._index = {role: i for i, role in enumerate(self.roles)}

    def __len__(self) -> int:
        return len(self.roles)

    def __contains__(self, role: str) -> bool:
        return role in self._index

    def role_id(self, role: str) -> int:
        try:
            return self._index[role]
        except KeyError:
            raise UnknownRole(f"role {role!r} is not in the role table") from None


def build_vocab(corpus: Sequence[Meeting], min_freq: int = 1, max_size: int = 50000) -> Vocab:
    """
    Build a vocabulary from transcript and summary tokens.

    Reserved tokens come first, then tokens seen at least ``min_freq`` times
    by descending frequency (ties lexicographic), up to ``max_size`` entries
    in total.
    """
    if not corpus:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    if min_freq < 1:
        raise ValueError("min_freq must be at least 1")
    if max_size <= len(RESERVED_TOKENS):
        raise ValueError(f"max_size must exceed the {len(RESERVED_TOKENS)} reserved tokens")

    counts: Counter = Counter()
    for meeting in corpus:
        for turn in meeting.turns:
            counts.update(turn.tokens)
        counts.update(meeting.summary)
    for token in RESERVED_TOKENS:
        counts.pop(token, None)

    ranked = sorted(
        (token for token, count in counts.items() if count >= min_freq),
        key=lambda token: (-counts[token], token),
    )
    return Vocab(list(RESERVED_TOKENS) + ranked[:max_size - len(RESERVED_TOKENS)])


def build_tag_vocabs(corpus: Sequence[Meeting]):
    """Return (pos_vocab, ent_vocab) covering every tag in the corpus."""
    pos, ent = set(), set()
    for meeting in corpus:
        for turn in meeting.turns:
            pos.update(turn.pos_tags)
            ent.update(turn.ent_tags)
    pos.discard(NONE_TAG)
    ent.discard(NONE_TAG)
    return TagVocab([NONE_TAG] + sorted(pos)), TagVocab([NONE_TAG] + sorted(ent))


def build_role_table(corpus: Sequence[Meeting]) -> RoleTable:
    """Roles in order of first appearance."""
    seen: Dict[str, None] = {}
    for meeting in corpus:
        for turn in meeting.turns:
            seen.setdefault(turn.role, None)
    return RoleTable(list(seen))

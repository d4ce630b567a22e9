import pytest

from src.data import (
    BEGIN_ID, END_ID, NONE_TAG, PAD_ID, RESERVED_TOKENS, UNK_ID, Meeting, RoleTable,
    TagVocab, Turn, Vocab, build_role_table, build_tag_vocabs, build_vocab, untagged_turn,
)
from src.exceptions import EmptyCorpus, IdOutOfRange, UnknownRole

def _meeting(*turns, summary=()):
    return Meeting(id="m", turns=[untagged_turn(role, tokens) for role, tokens in turns],
                   summary=list(summary))

def test_frequency_then_lexicographic_order():
    corpus = [_meeting(("A", ["b", "a", "c", "b"]), ("B", ["a"]), summary=["a", "b"])]
    vocab = build_vocab(corpus, min_freq=1, max_size=7)
    assert vocab.tokens == list(RESERVED_TOKENS) + ["a", "b"]

def test_min_freq_filters_everything():
    vocab = build_vocab([_meeting(("A", ["x", "y", "z"]))], min_freq=2)
    assert vocab.tokens == list(RESERVED_TOKENS)

def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        build_vocab([])

def test_max_size_must_exceed_reserved():
    with pytest.raises(ValueError):
        build_vocab([_meeting(("A", ["x"]))], max_size=5)

def test_reserved_ids_are_fixed():
    vocab = build_vocab([_meeting(("A", ["x"]))])
    assert (vocab.pad_id, vocab.unk_id, vocab.begin_id, vocab.end_id) == (PAD_ID, UNK_ID, BEGIN_ID, END_ID)

def test_encode_falls_back_to_unk_and_decode_checks_range():
    vocab = Vocab(list(RESERVED_TOKENS) + ["hi"])
    assert vocab.encode(["hi", "never"]) == [5, UNK_ID]
    assert vocab.decode([5]) == ["hi"]
    with pytest.raises(IdOutOfRange):
        vocab.decode([6])

def test_vocab_rejects_missing_reserved_prefix():
    with pytest.raises(ValueError):
        Vocab(["hi"])

def test_tag_vocabs_start_with_none():
    turn = Turn("A", ["remote", "is"], ["NOUN", "AUX"], ["PRODUCT", NONE_TAG])
    pos, ent = build_tag_vocabs([Meeting("m", [turn])])
    assert pos.tags == [NONE_TAG, "AUX", "NOUN"]
    assert ent.tags == [NONE_TAG, "PRODUCT"]
    assert pos.encode(["NOUN", "UNSEEN"]) == [2, 0]

def test_tag_vocab_requires_none_first():
    with pytest.raises(ValueError):
        TagVocab(["NOUN"])

def test_role_table_first_appearance_order():
    corpus = [_meeting(("PM", ["a"]), ("ME", ["b"]), ("PM", ["c"])), _meeting(("ID", ["d"]))]
    roles = build_role_table(corpus)
    assert roles.roles == ["PM", "ME", "ID"]
    assert roles.role_id("ID") == 2

def test_unknown_role():
    with pytest.raises(UnknownRole):
        RoleTable(["PM"]).role_id("boss")

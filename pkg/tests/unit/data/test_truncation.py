from src.config import ModelConfig
from src.data import Meeting, Turn, truncate_meeting, untagged_turn

def test_within_limits_unchanged(toy_meetings):
    limits = ModelConfig()
    assert truncate_meeting(toy_meetings[0], limits) == toy_meetings[0]

def test_keeps_earliest_turns():
    meeting = Meeting("m", [untagged_turn("PM", [str(i)]) for i in range(10)])
    cut = truncate_meeting(meeting, ModelConfig(max_turns=4))
    assert [t.tokens for t in cut.turns] == [["0"], ["1"], ["2"], ["3"]]

def test_cuts_parallel_lists_identically():
    tokens = [f"w{i}" for i in range(100)]
    turn = Turn("PM", tokens, [f"p{i}" for i in range(100)], [f"e{i}" for i in range(100)])
    cut = truncate_meeting(Meeting("m", [turn]), ModelConfig(max_turn_tokens=12)).turns[0]
    assert cut.tokens == tokens[:12]
    assert cut.pos_tags == [f"p{i}" for i in range(12)]
    assert cut.ent_tags == [f"e{i}" for i in range(12)]

def test_summary_reserves_marker_slots():
    meeting = Meeting("m", [untagged_turn("PM", ["a"])], summary=[str(i) for i in range(20)])
    cut = truncate_meeting(meeting, ModelConfig(max_summary_tokens=10))
    assert len(cut.summary) == 8

def test_idempotent(toy_meetings):
    limits = ModelConfig(max_turns=3, max_turn_tokens=4, max_summary_tokens=6)
    once = truncate_meeting(toy_meetings[1], limits)
    assert truncate_meeting(once, limits) == once

def test_does_not_mutate_input(toy_meetings):
    original = [list(t.tokens) for t in toy_meetings[2].turns]
    truncate_meeting(toy_meetings[2], ModelConfig(max_turn_tokens=2))
    assert [t.tokens for t in toy_meetings[2].turns] == original

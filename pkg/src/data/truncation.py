from dataclasses import replace

from src.config import ModelConfig
from src.data.schema import Meeting, Turn

# Summary slots taken by <begin> and <end>.
SUMMARY_MARKERS = 2


def truncate_meeting(meeting: Meeting, limits: ModelConfig) -> Meeting:
    """
    Cut a meeting to the model's length limits, keeping the earliest material.

    Each turn's tokens and tags are cut to ``max_turn_tokens``, the turn list to
    ``max_turns`` and the summary to ``max_summary_tokens`` minus the two
    marker slots. Meetings within limits come back structurally equal.
    """
    n = limits.max_turn_tokens
    turns = [
        Turn(role=t.role, tokens=t.tokens[:n], pos_tags=t.pos_tags[:n], ent_tags=t.ent_tags[:n])
        for t in meeting.turns[:limits.max_turns]
    ]
    summary_room = max(limits.max_summary_tokens - SUMMARY_MARKERS, 0)
    return replace(meeting, turns=turns, summary=meeting.summary[:summary_room])

import logging
from dataclasses import replace
from typing import List, Optional

from src.config import DecodeConfig
from src.data.schema import Meeting
from src.data.truncation import truncate_meeting
from src.decoding import beam_search, greedy_decode
from src.interfaces.isummarizer import ISummarizer
from src.model.hmnet import HMNetModel
from src.tensor import no_grad


class HMNetSummarizer(ISummarizer):
    """
    Generates summaries with a trained model.

    Meetings are truncated to the model's limits, featurized, encoded once
    and decoded with beam search (or greedy decoding when ``greedy`` is set).
    """

    def __init__(self, model: HMNetModel, decode_config: DecodeConfig,
                 greedy: bool = False, name: Optional[str] = None):
        self.model = model
        self.decode_config = decode_config
        self.greedy = greedy
        self.name = name or ("HMNet-greedy" if greedy else "HMNet")
        self.logger = logging.getLogger(self.__class__.__name__)

    def with_decoding(self, **changes) -> "HMNetSummarizer":
        """Same model, different decoding settings (used by the grid search)."""
        return HMNetSummarizer(self.model, replace(self.decode_config, **changes),
                               self.greedy, self.name)

    def summarize(self, meeting: Meeting) -> List[str]:
        meeting = truncate_meeting(meeting, self.model.config)
        features = self.model.featurizer.featurize(meeting)
        cfg = self.decode_config
        with no_grad():
            enc = self.model.encode(features)
            if self.greedy:
                ids = greedy_decode(self.model, enc, cfg.max_len, cfg.min_len)
            else:
                ids = beam_search(self.model, enc, cfg)
        tokens = self.model.featurizer.decode_summary(ids)
        self.logger.debug(f"Summarized {meeting.id}: {len(tokens)} tokens")
        return tokens

    def get_name(self) -> str:
        return self.name

from abc import ABC, abstractmethod
from typing import Any, Sequence

import numpy as np

class INextTokenScorer(ABC):
    @abstractmethod
    def next_token_logits(self, prefix: Sequence[int], enc: Any) -> np.ndarray:
        """
        Score every vocabulary entry as the continuation of ``prefix``

        Args:
            prefix: Token ids generated so far, starting with <begin>
            enc: Encoder output the scores are conditioned on

        Returns:
            Pre-softmax scores of shape [vocab_size]
        """
        pass

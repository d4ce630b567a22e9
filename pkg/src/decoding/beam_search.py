import logging
from dataclasses import dataclass, field
from typing import Any, List, Sequence

import numpy as np

from src.config import DecodeConfig
from src.data.vocab import BEGIN_ID, END_ID
from src.exceptions import EmptyHypothesis
from src.interfaces.iscorer import INextTokenScorer

logger = logging.getLogger(__name__)


@dataclass
class BeamHypothesis:
    """Partial sequence starting with <begin>, with its cumulative log-probability."""
    token_ids: List[int]
    log_prob: float = 0.0
    end_id: int = field(default=END_ID, repr=False)

    @property
    def finished(self) -> bool:
        return len(self.token_ids) > 1 and self.token_ids[-1] == self.end_id

    @property
    def generated(self) -> List[int]:
        return self.token_ids[1:]


def apply_trigram_block(prefix: Sequence[int], logits: np.ndarray) -> np.ndarray:
    """
    Return a copy of ``logits`` with -inf for every token w such that
    (prefix[-2], prefix[-1], w) already occurs as a trigram in ``prefix``.
    """
    blocked = np.array(logits, dtype=np.float64, copy=True)
    if len(prefix) < 2:
        return blocked
    a, b = prefix[-2], prefix[-1]
    for i in range(len(prefix) - 2):
        if prefix[i] == a and prefix[i + 1] == b:
            blocked[prefix[i + 2]] = -np.inf
    return blocked


def hypothesis_score(h: BeamHypothesis) -> float:
    """Average log-likelihood per generated token (<begin> excluded, <end> included)."""
    n = len(h.generated)
    if n == 0:
        raise EmptyHypothesis("hypothesis has no generated tokens")
    return h.log_prob / n


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    finite = np.isfinite(logits)
    shifted = logits - logits[finite].max()
    with np.errstate(divide="ignore"):
        return shifted - np.log(np.exp(shifted).sum())


def _step_log_probs(
    scorer: INextTokenScorer, hyp: BeamHypothesis, enc: Any, cfg: DecodeConfig, end_id: int
) -> np.ndarray:
    logits = np.asarray(scorer.next_token_logits(hyp.token_ids, enc), dtype=np.float64)
    if cfg.trigram_blocking:
        logits = apply_trigram_block(hyp.generated, logits)
    else:
        logits = logits.copy()
    if len(hyp.generated) < cfg.min_len:
        logits[end_id] = -np.inf
    if not np.isfinite(logits).any():
        return logits
    return _log_softmax(logits)


def beam_search(
    scorer: INextTokenScorer,
    enc: Any,
    cfg: DecodeConfig,
    begin_id: int = BEGIN_ID,
    end_id: int = END_ID,
) -> List[int]:
    """
    Length-synchronous beam search.

    Each step expands every live hypothesis over the vocabulary and keeps the
    top ``beam_size`` candidates by cumulative log-probability (ties go to the
    lower token id, then the earlier hypothesis). Candidates ending in <end>
    are set aside as finished. Search stops once ``beam_size`` hypotheses have
    finished or after ``max_len`` steps, when surviving hypotheses are kept as
    they are. The result is the kept hypothesis with the best average
    log-likelihood per token, without <begin>/<end>.
    """
    live = [BeamHypothesis([begin_id], 0.0, end_id)]
    finished: List[BeamHypothesis] = []
    reached_max_len = True

    for _ in range(cfg.max_len):
        scores = np.stack([
            hyp.log_prob + _step_log_probs(scorer, hyp, enc, cfg, end_id) for hyp in live
        ])
        ranks, tokens = np.nonzero(np.isfinite(scores))
        if len(tokens) == 0:
            reached_max_len = False
            break
        values = scores[ranks, tokens]
        # Primary key: score descending; then token id, then hypothesis rank.
        order = np.lexsort((ranks, tokens, -values))[:cfg.beam_size]

        next_live = []
        for i in order:
            hyp = BeamHypothesis(
                live[ranks[i]].token_ids + [int(tokens[i])], float(values[i]), end_id
            )
            (finished if hyp.finished else next_live).append(hyp)
        live = next_live
        if len(finished) >= cfg.beam_size or not live:
            reached_max_len = False
            break

    pool = finished + (live if reached_max_len else [])
    if not pool:
        logger.warning("Beam search produced no hypothesis")
        return []
    best = max(pool, key=hypothesis_score)
    return [t for t in best.generated if t != end_id]


def greedy_decode(
    scorer: INextTokenScorer,
    enc: Any,
    max_len: int,
    min_len: int = 0,
    begin_id: int = BEGIN_ID,
    end_id: int = END_ID,
) -> List[int]:
    """Arg-max decoding (lowest id on ties) until <end> or ``max_len`` tokens."""
    tokens = [begin_id]
    for _ in range(max_len):
        logits = np.asarray(scorer.next_token_logits(tokens, enc), dtype=np.float64).copy()
        if len(tokens) - 1 < min_len:
            logits[end_id] = -np.inf
        token = int(np.argmax(logits))
        tokens.append(token)
        if token == end_id:
            break
    return [t for t in tokens[1:] if t != end_id]

"""Reference-point systems: extractive oracle, copy-from-train and random sentences."""
import logging
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.data.schema import Meeting
from src.exceptions import EmptyPool, EmptyTranscript
from src.interfaces.isummarizer import ISummarizer
from src.evaluation.rouge import RougeScore, mean_scores, rouge_all, rouge_n

logger = logging.getLogger(__name__)

Tokens = List[str]


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")


def extractive_oracle(sentences: Sequence[Tokens], reference: Tokens, k: int) -> Tokens:
    """
    Concatenate the k sentences with the highest individual ROUGE-1 F1
    against the reference (ties to the earlier sentence), in transcript order.
    """
    _check_k(k)
    if not sentences:
        raise EmptyTranscript("oracle needs at least one transcript sentence")
    scores = [rouge_n(sentence, reference, 1).f1 for sentence in sentences]
    ranked = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))
    chosen = sorted(ranked[:k])
    return [token for i in chosen for token in sentences[i]]


def random_sentences(sentences: Sequence[Tokens], k: int, rng: np.random.Generator) -> Tokens:
    """k sentences drawn uniformly without replacement, emitted in transcript order."""
    _check_k(k)
    if not sentences:
        raise EmptyTranscript("random baseline needs at least one transcript sentence")
    picked = np.sort(rng.choice(len(sentences), size=min(k, len(sentences)), replace=False))
    return [token for i in picked for token in sentences[i]]


def copy_from_train(
    train_summaries: Sequence[Tokens],
    eval_pairs: Sequence[Tuple[str, Tokens]],
    trials: int = 50,
    seed: int = 0,
) -> Dict[str, RougeScore]:
    """
    Score summaries copied from the training set.

    For every (doc_id, reference) pair, ``trials`` training summaries are
    drawn uniformly with replacement and their scores averaged; the result is
    the mean over documents for each metric.

    Raises:
        EmptyPool: If there are no training summaries or no evaluation items
    """
    if not train_summaries:
        raise EmptyPool("copy-from-train needs at least one training summary")
    if not eval_pairs:
        raise EmptyPool("copy-from-train needs at least one evaluation item")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")

    rng = np.random.default_rng(seed)
    per_doc = []
    for doc_id, reference in eval_pairs:
        draws = rng.integers(len(train_summaries), size=trials)
        per_doc.append(mean_scores(rouge_all(train_summaries[i], reference) for i in draws))
    logger.info(f"Copy-from-train over {len(eval_pairs)} documents, {trials} trials each")
    return mean_scores(per_doc)


def random_baseline(
    eval_items: Sequence[Tuple[Sequence[Tokens], Tokens]],
    k: int,
    trials: int = 50,
    seed: int = 0,
) -> Dict[str, RougeScore]:
    """Average over ``trials`` random k-sentence extracts per (sentences, reference) item."""
    if not eval_items:
        raise EmptyPool("random baseline needs at least one evaluation item")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")

    rng = np.random.default_rng(seed)
    per_doc = []
    for sentences, reference in eval_items:
        per_doc.append(mean_scores(
            rouge_all(random_sentences(sentences, k, rng), reference) for _ in range(trials)
        ))
    return mean_scores(per_doc)


class ExtractiveOracleSummarizer(ISummarizer):
    """Upper-bound extractive system; reads the meeting's reference summary."""

    def __init__(self, k: int):
        _check_k(k)
        self.k = k

    def summarize(self, meeting: Meeting) -> Tokens:
        return extractive_oracle(meeting.sentences(), meeting.summary, self.k)

    def get_name(self) -> str:
        return "Extractive Oracle"


class RandomSummarizer(ISummarizer):
    def __init__(self, k: int, seed: int = 0):
        _check_k(k)
        self.k = k
        self.rng = np.random.default_rng(seed)

    def summarize(self, meeting: Meeting) -> Tokens:
        return random_sentences(meeting.sentences(), self.k, self.rng)

    def get_name(self) -> str:
        return "Random"


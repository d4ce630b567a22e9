from typing import Sequence

from src.exceptions import TooShort


def novel_ngram_ratio(summary: Sequence[str], transcript: Sequence[str], n: int) -> float:
    """Percentage of the summary's n-gram instances that never occur contiguously in the transcript."""
    if n < 1:
        raise ValueError(f"n-gram order must be at least 1, got {n}")
    if len(summary) < n:
        raise TooShort(f"summary of {len(summary)} tokens has no {n}-grams")
    seen = {tuple(transcript[i:i + n]) for i in range(len(transcript) - n + 1)}
    grams = [tuple(summary[i:i + n]) for i in range(len(summary) - n + 1)]
    novel = sum(1 for gram in grams if gram not in seen)
    return 100.0 * novel / len(grams)

"""ROUGE-N and ROUGE-SU4 on pre-tokenized text (no stemming, no stopword removal)."""
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, Sequence

# Sentence-begin marker paired with every token for the SU4 unigram extension.
# A tuple can never equal a token string, so it cannot collide with real pairs.
BEGIN_MARKER = ("<sentence-begin>",)
# At most four tokens between the two halves of a skip-bigram.
MAX_SKIP = 4


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, match: int, candidate_total: int, reference_total: int) -> "RougeScore":
        """Clipped-overlap precision/recall with balanced F1; empty denominators give 0."""
        precision = match / candidate_total if candidate_total else 0.0
        recall = match / reference_total if reference_total else 0.0
        # 2PR/(P+R) written over counts, exact when P+R > 0
        f1 = 2.0 * match / (candidate_total + reference_total) if match else 0.0
        return cls(precision, recall, f1)

    def as_dict(self) -> Dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


class NGramCounts(Counter):
    """Multiset of counting units (n-grams or token pairs)."""

    @classmethod
    def ngrams(cls, tokens: Sequence[str], n: int) -> "NGramCounts":
        if n < 1:
            raise ValueError(f"n-gram order must be at least 1, got {n}")
        return cls(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))

    @classmethod
    def skip_bigrams(cls, tokens: Sequence[str], max_skip: int = MAX_SKIP) -> "NGramCounts":
        """Ordered pairs with at most ``max_skip`` intervening tokens, plus (begin, token) pairs."""
        units = cls((BEGIN_MARKER, token) for token in tokens)
        for i in range(len(tokens)):
            for j in range(i + 1, min(i + max_skip + 2, len(tokens))):
                units[(tokens[i], tokens[j])] += 1
        return units

    def overlap(self, other: "NGramCounts") -> int:
        return sum(min(count, other[unit]) for unit, count in self.items())

    def total(self) -> int:
        return sum(self.values())


def _score(candidate: NGramCounts, reference: NGramCounts) -> RougeScore:
    return RougeScore.from_counts(candidate.overlap(reference), candidate.total(), reference.total())


def rouge_n(candidate: Sequence[str], reference: Sequence[str], n: int) -> RougeScore:
    return _score(NGramCounts.ngrams(candidate, n), NGramCounts.ngrams(reference, n))


def rouge_su4(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    return _score(NGramCounts.skip_bigrams(candidate), NGramCounts.skip_bigrams(reference))


METRICS = ("rouge-1", "rouge-2", "rouge-su4")


def rouge_all(candidate: Sequence[str], reference: Sequence[str]) -> Dict[str, RougeScore]:
    return {
        "rouge-1": rouge_n(candidate, reference, 1),
        "rouge-2": rouge_n(candidate, reference, 2),
        "rouge-su4": rouge_su4(candidate, reference),
    }


def mean_scores(scores: Iterable[Dict[Hashable, RougeScore]]) -> Dict[Hashable, RougeScore]:
    """Component-wise mean of several score dicts sharing the same keys."""
    scores = list(scores)
    if not scores:
        raise ValueError("cannot average an empty list of scores")
    return {
        key: RougeScore(
            precision=sum(s[key].precision for s in scores) / len(scores),
            recall=sum(s[key].recall for s in scores) / len(scores),
            f1=sum(s[key].f1 for s in scores) / len(scores),
        )
        for key in scores[0]
    }

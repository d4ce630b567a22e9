"""News articles -> pseudo meetings for pretraining.

M articles become an M-speaker meeting: each sentence of article i is a turn
spoken by "<source_name>-i", turns are shuffled, and the target summary is the
concatenation of the article summaries in article order.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from src.data.schema import Article, Meeting, untagged_turn
from src.exceptions import EmptyArticle, EmptyCorpus

logger = logging.getLogger(__name__)


def news_to_pseudo_meeting(
    articles: Sequence[Article], seed: int, meeting_id: Optional[str] = None
) -> Meeting:
    if not articles:
        raise EmptyCorpus("a pseudo meeting needs at least one article")

    turns = []
    summary: List[str] = []
    for speaker, article in enumerate(articles, start=1):
        if not article.sentences or any(not sentence for sentence in article.sentences):
            raise EmptyArticle(f"article {speaker} from {article.source_name} is empty")
        role = f"{article.source_name}-{speaker}"
        turns.extend(untagged_turn(role, sentence) for sentence in article.sentences)
        summary.extend(article.summary)

    order = np.random.default_rng(seed).permutation(len(turns))
    return Meeting(
        id=meeting_id or f"pseudo-{seed}",
        turns=[turns[i] for i in order],
        summary=summary,
    )


def group_articles(articles: Sequence[Article], articles_per_meeting: int) -> List[List[Article]]:
    """Consecutive groups of M articles; a final partial group is kept."""
    if articles_per_meeting < 1:
        raise ValueError("articles_per_meeting must be at least 1")
    groups = [
        list(articles[i:i + articles_per_meeting])
        for i in range(0, len(articles), articles_per_meeting)
    ]
    if groups and len(groups[-1]) < articles_per_meeting:
        logger.info(
            "Keeping final partial group of %d articles as a %d-speaker meeting",
            len(groups[-1]), len(groups[-1]),
        )
    return groups


def convert_articles(
    articles: Sequence[Article], articles_per_meeting: int, seed: int
) -> List[Meeting]:
    """Convert a whole article corpus; group g is shuffled with seed ``seed + g``."""
    return [
        news_to_pseudo_meeting(group, seed + g, meeting_id=f"pseudo-{g}")
        for g, group in enumerate(group_articles(articles, articles_per_meeting))
    ]

"""Seeded toy corpora with AMI-like structure, for tests and smoke runs."""
from typing import List, Tuple

import numpy as np

from src.data.schema import NONE_TAG, Article, Meeting, Turn

MEETING_ROLES = ("PM", "ID", "UI", "ME")

_TOPICS = ("remote", "battery", "button", "screen", "case", "colour", "price", "logo")
_ADJECTIVES = ("cheap", "round", "yellow", "small", "rubber", "curved", "simple", "bright")
_VERBS = ("likes", "wants", "prefers", "checks")
_FILLERS = (("okay",), ("yeah", "right"), ("um", "so"), ("good", "idea"))

_NEWS_NOUNS = ("council", "storm", "market", "team", "court", "company", "river", "school")
_NEWS_VERBS = ("approved", "hit", "closed", "won", "blocked", "opened", "flooded", "hired")
_NEWS_PLACES = ("london", "paris", "tokyo", "boston", "madrid", "sydney")

Tagged = List[Tuple[str, str, str]]


def _utterance(rng: np.random.Generator, topic: str, adj: str) -> Tagged:
    ent = "PRODUCT"
    templates = (
        [("i", "PRON", NONE_TAG), ("think", "VERB", NONE_TAG), ("the", "DET", NONE_TAG),
         (topic, "NOUN", ent), ("should", "AUX", NONE_TAG), ("be", "AUX", NONE_TAG),
         (adj, "ADJ", NONE_TAG)],
        [("we", "PRON", NONE_TAG), (str(rng.choice(_VERBS)), "VERB", NONE_TAG),
         ("a", "DET", NONE_TAG), (adj, "ADJ", NONE_TAG), (topic, "NOUN", ent)],
        [("the", "DET", NONE_TAG), (topic, "NOUN", ent), ("is", "AUX", NONE_TAG),
         ("too", "ADV", NONE_TAG), (adj, "ADJ", NONE_TAG)],
        [("maybe", "ADV", NONE_TAG), ("a", "DET", NONE_TAG), (adj, "ADJ", NONE_TAG),
         (topic, "NOUN", ent), ("works", "VERB", NONE_TAG)],
    )
    tagged = list(templates[rng.integers(len(templates))])
    if rng.random() < 0.4:
        filler = _FILLERS[rng.integers(len(_FILLERS))]
        tagged = [(word, "INTJ", NONE_TAG) for word in filler] + tagged
    return tagged[:12]


def synthetic_meetings(n: int, seed: int, max_turns: int = 6) -> List[Meeting]:
    """
    Meetings with four roles (PM/ID/UI/ME), at most ``max_turns`` turns of at
    most 12 tokens, and a 9-token summary naming the two features discussed.
    """
    rng = np.random.default_rng(seed)
    meetings = []
    for index in range(n):
        topics = rng.choice(len(_TOPICS), size=2, replace=False)
        adjectives = rng.choice(len(_ADJECTIVES), size=2, replace=False)
        chosen = [(_TOPICS[t], _ADJECTIVES[a]) for t, a in zip(topics, adjectives)]
        n_turns = int(rng.integers(3, max_turns + 1))
        turns = []
        for i in range(n_turns):
            topic, adj = chosen[i % 2] if rng.random() < 0.8 else (
                _TOPICS[rng.integers(len(_TOPICS))], _ADJECTIVES[rng.integers(len(_ADJECTIVES))]
            )
            tagged = _utterance(rng, topic, adj)
            turns.append(Turn(
                role=MEETING_ROLES[i % len(MEETING_ROLES)] if i < 4 else str(rng.choice(MEETING_ROLES)),
                tokens=[w for w, _, _ in tagged],
                pos_tags=[p for _, p, _ in tagged],
                ent_tags=[e for _, _, e in tagged],
            ))
        (topic1, adj1), (topic2, adj2) = chosen
        summary = ["the", "team", "chose", "a", adj1, topic1, "with", adj2, topic2]
        meetings.append(Meeting(id=f"synthetic-{seed}-{index}", turns=turns, summary=summary))
    return meetings


def synthetic_articles(n: int, seed: int, source_name: str = "news") -> List[Article]:
    """Articles of 2-4 short sentences whose summary restates the first sentence."""
    rng = np.random.default_rng(seed)
    articles = []
    for _ in range(n):
        sentences = []
        for _ in range(int(rng.integers(2, 5))):
            noun, other = rng.choice(_NEWS_NOUNS, size=2, replace=False)
            sentences.append([
                "the", str(noun), str(rng.choice(_NEWS_VERBS)), "the", str(other),
                "in", str(rng.choice(_NEWS_PLACES)),
            ])
        lead = sentences[0]
        articles.append(Article(
            source_name=source_name,
            sentences=sentences,
            summary=[lead[1], lead[2], lead[4], lead[6]],
        ))
    return articles

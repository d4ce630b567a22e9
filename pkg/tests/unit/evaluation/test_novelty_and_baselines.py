import numpy as np
import pytest

from src.data import Meeting, untagged_turn
from src.evaluation import (
    ExtractiveOracleSummarizer, RandomSummarizer, copy_from_train, extractive_oracle,
    novel_ngram_ratio, random_baseline, random_sentences, rouge_all,
)
from src.exceptions import EmptyPool, EmptyTranscript, TooShort

def test_novel_bigrams_hand_example():
    assert novel_ngram_ratio("a b c".split(), "a b d c".split(), 2) == 50.0

def test_novelty_extremes():
    transcript = "we want a yellow remote".split()
    for n in (1, 2, 3, 4):
        assert novel_ngram_ratio(transcript[1:], transcript, n) == 0.0
        assert novel_ngram_ratio("x y z w".split(), transcript, n) == 100.0

def test_novelty_never_grows_with_transcript():
    rng = np.random.default_rng(0)
    summary = list(rng.choice(list("abcdef"), size=8))
    transcript = []
    previous = 100.0
    for token in rng.choice(list("abcdef"), size=30):
        transcript.append(str(token))
        ratio = novel_ngram_ratio(summary, transcript, 2)
        assert ratio <= previous
        previous = ratio

def test_novelty_errors():
    with pytest.raises(TooShort):
        novel_ngram_ratio(["a"], ["a", "b"], 2)
    with pytest.raises(ValueError):
        novel_ngram_ratio(["a"], ["a"], 0)

def test_oracle_ranks_then_reorders():
    reference = "a b c d e".split()
    sentences = [
        ["a"] + ["x"] * 14,              # F1 0.1
        ["a", "b", "c"] + ["y"] * 4,     # F1 0.5
        ["a", "b", "c"] + ["z"] * 12,    # F1 0.3
    ]
    assert extractive_oracle(sentences, reference, 2) == sentences[1] + sentences[2]

def test_oracle_picks_matching_sentence_and_counts():
    sentences = [["hello"], ["the", "cat"], ["dog"]]
    assert extractive_oracle(sentences, ["the", "cat"], 1) == ["the", "cat"]
    assert extractive_oracle(sentences, ["the", "cat"], 10) == ["hello", "the", "cat", "dog"]

def test_oracle_ties_go_to_earlier_sentence():
    assert extractive_oracle([["x"], ["y"], ["z"]], ["q"], 1) == ["x"]

def test_oracle_errors():
    with pytest.raises(EmptyTranscript):
        extractive_oracle([], ["a"], 1)
    with pytest.raises(ValueError):
        extractive_oracle([["a"]], ["a"], 0)

def test_random_sentences_keep_transcript_order():
    sentences = [[str(i)] for i in range(10)]
    picked = random_sentences(sentences, 4, np.random.default_rng(1))
    assert len(picked) == 4
    assert picked == sorted(picked, key=int)

def test_copy_from_train_single_pool_is_deterministic():
    pool = [["the", "team", "chose"]]
    reference = ["the", "team", "agreed"]
    scores = copy_from_train(pool, [("m1", reference)], trials=5, seed=3)
    expected = rouge_all(pool[0], reference)
    for metric, score in scores.items():
        assert score.f1 == pytest.approx(expected[metric].f1)
        assert score.recall == pytest.approx(expected[metric].recall)

def test_copy_from_train_repeatable():
    pool = [["a", "b"], ["b", "c"], ["c", "d"]]
    pairs = [("m1", ["a", "b", "c"]), ("m2", ["d"])]
    assert copy_from_train(pool, pairs, trials=10, seed=9) == copy_from_train(pool, pairs, trials=10, seed=9)

def test_copy_from_train_empty_pool():
    with pytest.raises(EmptyPool):
        copy_from_train([], [("m", ["a"])])
    with pytest.raises(EmptyPool):
        copy_from_train([["a"]], [])

def test_random_baseline_in_range():
    items = [([["a", "b"], ["c"], ["d", "e"]], ["a", "c"])]
    scores = random_baseline(items, k=1, trials=20, seed=0)
    assert all(0.0 <= s.f1 <= 1.0 for s in scores.values())

def test_baseline_summarizers():
    meeting = Meeting("m", [untagged_turn("PM", ["hello"]), untagged_turn("ID", ["the", "cat"])],
                      summary=["the", "cat"])
    oracle = ExtractiveOracleSummarizer(1)
    assert oracle.summarize(meeting) == ["the", "cat"]
    assert oracle.get_name() == "Extractive Oracle"
    assert len(RandomSummarizer(1, seed=0).summarize(meeting)) in (1, 2)
    with pytest.raises(ValueError):
        RandomSummarizer(0)

import itertools

import numpy as np
import pytest

from src.config import DecodeConfig
from src.decoding import BeamHypothesis, apply_trigram_block, beam_search, greedy_decode, hypothesis_score
from src.exceptions import EmptyHypothesis
from src.interfaces.iscorer import INextTokenScorer

BEGIN, END = 3, 4

class RandomScorer(INextTokenScorer):
    """Fixed pseudo-random logits per prefix."""

    def __init__(self, vocab_size, seed):
        self.vocab_size = vocab_size
        self.seed = seed
        self.cache = {}

    def next_token_logits(self, prefix, enc):
        key = tuple(prefix)
        if key not in self.cache:
            code = sum(int(t) * (self.vocab_size + 1) ** i for i, t in enumerate(key))
            rng = np.random.default_rng([self.seed, code])
            self.cache[key] = rng.normal(0.0, 2.0, size=self.vocab_size)
        return self.cache[key]

class CyclingScorer(INextTokenScorer):
    """Strongly prefers 5, 6, 7, 5, 6, 7, ... and never <end>."""

    def next_token_logits(self, prefix, enc):
        logits = np.zeros(10)
        logits[5 + (len(prefix) - 1) % 3] = 10.0
        logits[END] = -10.0
        return logits

class EagerEndScorer(INextTokenScorer):
    def next_token_logits(self, prefix, enc):
        logits = np.arange(10, dtype=float) * 0.1
        logits[END] = 50.0
        return logits

def _log_softmax(x):
    shifted = x - x.max()
    return shifted - np.log(np.exp(shifted).sum())

def test_trigram_block_examples():
    logits = np.zeros(6)
    a, b, c, d = 1, 2, 3, 4
    blocked = apply_trigram_block([a, b, c, a, b], logits)
    assert blocked[c] == -np.inf
    assert blocked[d] == 0.0
    assert np.isfinite(np.delete(blocked, c)).all()
    assert (logits == 0).all()
    np.testing.assert_array_equal(apply_trigram_block([a], logits), logits)

def test_hypothesis_score():
    assert hypothesis_score(BeamHypothesis([BEGIN, 7], -2.0)) == -2.0
    assert hypothesis_score(BeamHypothesis([BEGIN, 7, 8, END], -6.0)) == -2.0
    with pytest.raises(EmptyHypothesis):
        hypothesis_score(BeamHypothesis([BEGIN]))

def test_finished_flag():
    assert BeamHypothesis([BEGIN, 5, END]).finished
    assert not BeamHypothesis([BEGIN, 5]).finished

@pytest.mark.parametrize("seed", range(5))
def test_beam_of_one_equals_greedy(seed):
    scorer = RandomScorer(8, seed)
    cfg = DecodeConfig(beam_size=1, min_len=0, max_len=6, trigram_blocking=False)
    assert beam_search(scorer, None, cfg, BEGIN, END) == greedy_decode(scorer, None, 6, 0, BEGIN, END)

def _brute_force_best(scorer, max_len):
    best, best_score = None, -np.inf
    for length in range(1, max_len + 1):
        for body in itertools.product(range(5), repeat=length):
            if END in body[:-1] or (length < max_len and body[-1] != END):
                continue
            prefix, total = [BEGIN], 0.0
            for token in body:
                total += _log_softmax(scorer.next_token_logits(prefix, None))[token]
                prefix.append(token)
            if total / length > best_score:
                best, best_score = [t for t in body if t != END], total / length
    return best

@pytest.mark.parametrize("seed", range(3))
def test_wide_beam_finds_exhaustive_optimum(seed):
    scorer = RandomScorer(5, seed)
    cfg = DecodeConfig(beam_size=625, min_len=0, max_len=4, trigram_blocking=False)
    assert beam_search(scorer, None, cfg, BEGIN, END) == _brute_force_best(scorer, 4)

def test_no_trigram_repeats_with_blocking():
    cfg = DecodeConfig(beam_size=2, min_len=0, max_len=12, trigram_blocking=True)
    out = beam_search(CyclingScorer(), None, cfg, BEGIN, END)
    trigrams = [tuple(out[i:i + 3]) for i in range(len(out) - 2)]
    assert len(out) == 12
    assert len(trigrams) == len(set(trigrams))

def test_without_blocking_trigrams_repeat():
    cfg = DecodeConfig(beam_size=2, min_len=0, max_len=9, trigram_blocking=False)
    assert beam_search(CyclingScorer(), None, cfg, BEGIN, END) == [5, 6, 7] * 3

@pytest.mark.parametrize("beam_size", [1, 3])
def test_min_len_masks_end(beam_size):
    cfg = DecodeConfig(beam_size=beam_size, min_len=3, max_len=8)
    assert len(beam_search(EagerEndScorer(), None, cfg, BEGIN, END)) == 3
    assert len(greedy_decode(EagerEndScorer(), None, 8, 3, BEGIN, END)) == 3

def test_immediate_end_gives_empty_summary():
    cfg = DecodeConfig(beam_size=2, min_len=0, max_len=8)
    assert beam_search(EagerEndScorer(), None, cfg, BEGIN, END) == []

def test_output_length_within_bounds():
    for seed in range(5):
        cfg = DecodeConfig(beam_size=3, min_len=2, max_len=5)
        out = beam_search(RandomScorer(10, seed), None, cfg, BEGIN, END)
        assert 2 <= len(out) <= 5
        assert END not in out

def test_on_real_model(tiny_model, featurizer, toy_meetings):
    enc = tiny_model.encode(featurizer.featurize(toy_meetings[0]))
    cfg = DecodeConfig(beam_size=2, min_len=1, max_len=4)
    first = beam_search(tiny_model, enc, cfg)
    assert first == beam_search(tiny_model, enc, cfg)
    assert 1 <= len(first) <= 4

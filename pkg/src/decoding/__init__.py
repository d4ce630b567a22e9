from .beam_search import (
    BeamHypothesis,
    apply_trigram_block,
    hypothesis_score,
    beam_search,
    greedy_decode,
)

__all__ = [
    'BeamHypothesis',
    'apply_trigram_block',
    'hypothesis_score',
    'beam_search',
    'greedy_decode'
]

"""Finite-difference checks over every differentiable composite, small enough to run in CI."""
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from src.config import ModelConfig
from src.data.features import Featurizer
from src.data.synthetic import synthetic_meetings
from src.data.vocab import build_role_table, build_tag_vocabs, build_vocab
from src.model.hmnet import HMNetModel
from src.nn import AttentionParams, DecoderBlockParams, EncoderBlockParams, LayerNormParams
from src.nn import decoder_block, encoder_block, multi_head_attention
from src.tensor import Tensor, cross_entropy, grad_check, layer_norm, softmax
from src.tensor import ops

logger = logging.getLogger(__name__)

TOLERANCE = 1e-4
GRADCHECK_EPS = 1e-5

Case = Tuple[str, Callable[[Tensor], Tensor], Tensor]


def gradcheck_model_config() -> ModelConfig:
    """2 layers, 2 heads, d_word=16; dropout off so f is deterministic."""
    return ModelConfig(n_layers=2, n_heads=2, d_word=16, d_pos=4, d_ent=4, d_role=8,
                       ffn_multiplier=2, dropout=0.0)


def _weighted_sum(out: Tensor, weights: np.ndarray) -> Tensor:
    return ops.sum(out * weights)


def _composite_cases(rng: np.random.Generator) -> List[Case]:
    d = 8
    gain = Tensor(rng.uniform(0.5, 1.5, size=d))
    bias = Tensor(rng.normal(0.0, 0.1, size=d))
    w = Tensor(rng.normal(0.0, 0.5, size=(d, 5)))
    targets = [0, 3, 1, 4]

    def chain(x: Tensor) -> Tensor:
        probs = softmax(layer_norm(x, gain, bias) @ w)
        return -ops.mean(ops.log(probs[np.arange(4), targets]))

    def chain_fused(x: Tensor) -> Tensor:
        return cross_entropy(layer_norm(x, gain, bias) @ w, targets)

    attention = AttentionParams.create(d, 6, 2, rng)
    memory = Tensor(rng.normal(size=(4, 6)))
    att_weights = rng.normal(size=(3, d))
    encoder = EncoderBlockParams.create(d, 2, 2, rng)
    decoder = DecoderBlockParams.create(d, 6, 10, 2, 2, rng)
    turn_memory = Tensor(rng.normal(size=(2, 10)))
    norm = LayerNormParams.create(d)
    norm_weights = rng.normal(size=(4, d))

    return [
        ("layer_norm", lambda x: _weighted_sum(layer_norm(x, norm.gain, norm.bias), norm_weights),
         Tensor(rng.normal(size=(4, d)))),
        ("layer_norm_softmax_chain", chain, Tensor(rng.normal(size=(4, d)))),
        ("layer_norm_cross_entropy_chain", chain_fused, Tensor(rng.normal(size=(4, d)))),
        ("attention_queries", lambda x: _weighted_sum(multi_head_attention(x, memory, attention), att_weights),
         Tensor(rng.normal(size=(3, d)))),
        ("attention_memory",
         lambda m: _weighted_sum(multi_head_attention(Tensor(att_weights), m, attention), att_weights),
         Tensor(rng.normal(size=(4, 6)))),
        ("encoder_block", lambda x: _weighted_sum(encoder_block(x, encoder), att_weights),
         Tensor(rng.normal(size=(3, d)))),
        ("decoder_block", lambda x: _weighted_sum(decoder_block(x, memory, turn_memory, decoder), att_weights),
         Tensor(rng.normal(size=(3, d)))),
    ]


def _model_cases(seed: int) -> List[Case]:
    meetings = synthetic_meetings(2, seed, max_turns=3)
    pos_vocab, ent_vocab = build_tag_vocabs(meetings)
    featurizer = Featurizer(build_vocab(meetings), pos_vocab, ent_vocab, build_role_table(meetings))
    model = HMNetModel.create(gradcheck_model_config(), featurizer, seed)
    features = featurizer.featurize(meetings[0])
    params = model.params
    last = params.decoder[-1]

    def loss(_: Tensor) -> Tensor:
        # The loss closes over the model; the checked tensor is perturbed in place.
        return model.loss(features)

    # Embedding rows reach the loss twice: as decoder inputs and as the tied output projection.
    return [
        ("hmnet_loss_tied_embedding", loss, params.embedding),
        ("hmnet_loss_role_table", loss, params.role_table),
        ("hmnet_loss_pos_embedding", loss, params.pos_embedding),
        ("hmnet_loss_word_stack_ffn_bias", loss, params.word_stack[0].ffn.b2),
        ("hmnet_loss_decoder_ffn_bias", loss, last.ffn.b2),
        ("hmnet_loss_decoder_norm_gain", loss, last.norm4.gain),
    ]


def run_gradcheck_suite(seed: int = 0, eps: float = GRADCHECK_EPS) -> Dict[str, float]:
    """Return the worst relative error of every case, keyed by case name."""
    rng = np.random.default_rng(seed)
    results = {}
    for name, f, x in _composite_cases(rng) + _model_cases(seed):
        results[name] = grad_check(f, x, eps)
        level = logging.INFO if results[name] < TOLERANCE else logging.ERROR
        logger.log(level, f"gradcheck {name}: max relative error {results[name]:.3e}")
    return results


def suite_passed(results: Dict[str, float], tolerance: float = TOLERANCE) -> bool:
    return all(error < tolerance for error in results.values())

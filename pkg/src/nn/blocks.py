"""Transformer machinery shared by the word-level, turn-level and decoder stacks."""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from src.exceptions import EmptyStack, OddDimension, ShapeMismatch, ZeroLength
from src.nn.params import ParamGroup, ones, projection, zeros
from src.tensor import EVAL, RunMode, Tensor, dropout, layer_norm, relu, reshape, softmax, transpose

LAYER_NORM_EPS = 1e-5


def positional_encoding(position: int, d: int) -> np.ndarray:
    """Sinusoidal encoding: dim 2j is sin(i / 10000^(2j/d)), dim 2j+1 the cosine."""
    if d % 2:
        raise OddDimension(f"positional encoding width must be even, got {d}")
    if position < 0:
        raise ValueError(f"position must be non-negative, got {position}")
    return positional_encodings(1, d, offset=position)[0]


def positional_encodings(n: int, d: int, offset: int = 0) -> np.ndarray:
    """Rows ``offset .. offset+n-1`` of the sinusoidal table, as an [n x d] array."""
    if d % 2:
        raise OddDimension(f"positional encoding width must be even, got {d}")
    positions = np.arange(offset, offset + n, dtype=np.float64)[:, None]
    rates = np.power(10000.0, np.arange(0, d, 2, dtype=np.float64) / d)
    angles = positions / rates
    table = np.empty((n, d))
    table[:, 0::2] = np.sin(angles)
    table[:, 1::2] = np.cos(angles)
    return table


def causal_mask(n: int) -> np.ndarray:
    """Boolean [n x n] mask, True where key j lies in the future of query i (j > i)."""
    if n < 1:
        raise ZeroLength("causal mask needs n >= 1")
    return np.triu(np.ones((n, n), dtype=bool), k=1)


@dataclass
class AttentionParams(ParamGroup):
    wq: Tensor
    wk: Tensor
    wv: Tensor
    wo: Tensor
    n_heads: int

    @classmethod
    def create(
        cls, d_query: int, d_memory: int, n_heads: int, rng: np.random.Generator
    ) -> "AttentionParams":
        if n_heads < 1 or d_query % n_heads:
            raise ShapeMismatch(f"query width {d_query} is not divisible by {n_heads} heads")
        inner = (d_query // n_heads) * n_heads
        return cls(
            wq=projection(rng, d_query, inner),
            wk=projection(rng, d_memory, inner),
            wv=projection(rng, d_memory, inner),
            wo=projection(rng, inner, d_query),
            n_heads=n_heads,
        )

    @property
    def d_query(self) -> int:
        return self.wq.shape[0]

    @property
    def d_memory(self) -> int:
        return self.wk.shape[0]

    @property
    def d_head(self) -> int:
        return self.wq.shape[1] // self.n_heads


@dataclass
class FeedForwardParams(ParamGroup):
    w1: Tensor
    b1: Tensor
    w2: Tensor
    b2: Tensor

    @classmethod
    def create(cls, d_model: int, d_ff: int, rng: np.random.Generator) -> "FeedForwardParams":
        return cls(
            w1=projection(rng, d_model, d_ff),
            b1=zeros(d_ff),
            w2=projection(rng, d_ff, d_model),
            b2=zeros(d_model),
        )


@dataclass
class LayerNormParams(ParamGroup):
    gain: Tensor
    bias: Tensor

    @classmethod
    def create(cls, d: int) -> "LayerNormParams":
        return cls(gain=ones(d), bias=zeros(d))


@dataclass
class EncoderBlockParams(ParamGroup):
    attention: AttentionParams
    ffn: FeedForwardParams
    norm1: LayerNormParams
    norm2: LayerNormParams

    @classmethod
    def create(
        cls, d_model: int, n_heads: int, ffn_multiplier: int, rng: np.random.Generator
    ) -> "EncoderBlockParams":
        return cls(
            attention=AttentionParams.create(d_model, d_model, n_heads, rng),
            ffn=FeedForwardParams.create(d_model, ffn_multiplier * d_model, rng),
            norm1=LayerNormParams.create(d_model),
            norm2=LayerNormParams.create(d_model),
        )

    @property
    def d_model(self) -> int:
        return self.attention.d_query


@dataclass
class DecoderBlockParams(ParamGroup):
    """
    Masked self-attention, word-memory attention, turn-memory attention, FFN.

    ``turn_attention`` and ``norm3`` are None for a decoder that reads a
    single (word-level) memory.
    """
    self_attention: AttentionParams
    word_attention: AttentionParams
    turn_attention: Optional[AttentionParams]
    ffn: FeedForwardParams
    norm1: LayerNormParams
    norm2: LayerNormParams
    norm3: Optional[LayerNormParams]
    norm4: LayerNormParams

    @classmethod
    def create(
        cls,
        d_model: int,
        d_word_memory: int,
        d_turn_memory: Optional[int],
        n_heads: int,
        ffn_multiplier: int,
        rng: np.random.Generator,
    ) -> "DecoderBlockParams":
        has_turns = d_turn_memory is not None
        return cls(
            self_attention=AttentionParams.create(d_model, d_model, n_heads, rng),
            word_attention=AttentionParams.create(d_model, d_word_memory, n_heads, rng),
            turn_attention=AttentionParams.create(d_model, d_turn_memory, n_heads, rng) if has_turns else None,
            ffn=FeedForwardParams.create(d_model, ffn_multiplier * d_model, rng),
            norm1=LayerNormParams.create(d_model),
            norm2=LayerNormParams.create(d_model),
            norm3=LayerNormParams.create(d_model) if has_turns else None,
            norm4=LayerNormParams.create(d_model),
        )


def _split_heads(x: Tensor, n_heads: int) -> Tensor:
    rows, width = x.shape
    return transpose(reshape(x, (rows, n_heads, width // n_heads)), (1, 0, 2))


def multi_head_attention(
    queries: Tensor,
    memory: Tensor,
    params: AttentionParams,
    mask: Optional[np.ndarray] = None,
    mode: RunMode = EVAL,
    dropout_rate: float = 0.0,
) -> Tensor:
    """
    Scaled dot-product attention of ``queries`` over ``memory``.

    Args:
        queries: [q x d_query]
        memory: [m x d_memory]; may be wider or narrower than the queries
        params: Projections for all heads
        mask: Optional boolean [q x m], True where a query may not attend
        mode: Train/eval mode (dropout on attention weights)
        dropout_rate: Dropout probability for attention weights

    Returns:
        [q x d_query] tensor

    Raises:
        ShapeMismatch: If widths disagree with ``params``
        AllMasked: If a query row has every key masked
    """
    if queries.ndim != 2 or queries.shape[1] != params.d_query:
        raise ShapeMismatch(f"queries {queries.shape} do not match query width {params.d_query}")
    if memory.ndim != 2 or memory.shape[1] != params.d_memory:
        raise ShapeMismatch(f"memory {memory.shape} does not match memory width {params.d_memory}")
    if mask is not None and np.shape(mask) != (queries.shape[0], memory.shape[0]):
        raise ShapeMismatch(
            f"mask {np.shape(mask)} does not match {queries.shape[0]} x {memory.shape[0]}"
        )

    heads = params.n_heads
    q = _split_heads(queries @ params.wq, heads)
    k = _split_heads(memory @ params.wk, heads)
    v = _split_heads(memory @ params.wv, heads)

    scores = (q @ transpose(k, (0, 2, 1))) * (1.0 / math.sqrt(params.d_head))
    weights = softmax(scores, axis=-1, mask=mask)
    weights = dropout(weights, dropout_rate, mode)
    context = transpose(weights @ v, (1, 0, 2))
    context = reshape(context, (queries.shape[0], heads * params.d_head))
    return context @ params.wo


def feed_forward(x: Tensor, params: FeedForwardParams) -> Tensor:
    return relu(x @ params.w1 + params.b1) @ params.w2 + params.b2


def _residual_norm(
    x: Tensor, sublayer_out: Tensor, norm: LayerNormParams, mode: RunMode, dropout_rate: float
) -> Tensor:
    return layer_norm(x + dropout(sublayer_out, dropout_rate, mode), norm.gain, norm.bias, LAYER_NORM_EPS)


def encoder_block(
    x: Tensor,
    params: EncoderBlockParams,
    mask: Optional[np.ndarray] = None,
    mode: RunMode = EVAL,
    dropout_rate: float = 0.0,
) -> Tensor:
    """LayerNorm(x + SelfAttention(x)) followed by LayerNorm(y + FFN(y))."""
    if x.ndim != 2 or x.shape[1] != params.d_model:
        raise ShapeMismatch(f"block of width {params.d_model} got input {x.shape}")
    attended = multi_head_attention(x, x, params.attention, mask, mode, dropout_rate)
    y = _residual_norm(x, attended, params.norm1, mode, dropout_rate)
    return _residual_norm(y, feed_forward(y, params.ffn), params.norm2, mode, dropout_rate)


def transformer_stack(
    x: Tensor,
    blocks: Sequence[EncoderBlockParams],
    mask: Optional[np.ndarray] = None,
    mode: RunMode = EVAL,
    dropout_rate: float = 0.0,
) -> Tensor:
    if not blocks:
        raise EmptyStack("a transformer stack needs at least one block")
    widths = {block.d_model for block in blocks}
    if len(widths) != 1:
        raise ShapeMismatch(f"blocks in one stack must share d_model, got {sorted(widths)}")
    for block in blocks:
        x = encoder_block(x, block, mask, mode, dropout_rate)
    return x


def decoder_block(
    x: Tensor,
    word_memory: Tensor,
    turn_memory: Optional[Tensor],
    params: DecoderBlockParams,
    mode: RunMode = EVAL,
    dropout_rate: float = 0.0,
) -> Tensor:
    """
    Causal self-attention, then word-level and turn-level cross-attention, then FFN.

    With ``turn_memory=None`` the turn-level sub-layer is skipped; the block
    must then have been created without one.
    """
    if (turn_memory is None) != (params.turn_attention is None):
        raise ShapeMismatch("turn memory and turn-attention weights must be given together")
    mask = causal_mask(x.shape[0])
    y = _residual_norm(
        x, multi_head_attention(x, x, params.self_attention, mask, mode, dropout_rate),
        params.norm1, mode, dropout_rate,
    )
    y = _residual_norm(
        y, multi_head_attention(y, word_memory, params.word_attention, None, mode, dropout_rate),
        params.norm2, mode, dropout_rate,
    )
    if turn_memory is not None:
        y = _residual_norm(
            y, multi_head_attention(y, turn_memory, params.turn_attention, None, mode, dropout_rate),
            params.norm3, mode, dropout_rate,
        )
    return _residual_norm(y, feed_forward(y, params.ffn), params.norm4, mode, dropout_rate)


def create_stack(
    n_layers: int, d_model: int, n_heads: int, ffn_multiplier: int, rng: np.random.Generator
) -> List[EncoderBlockParams]:
    return [EncoderBlockParams.create(d_model, n_heads, ffn_multiplier, rng) for _ in range(n_layers)]

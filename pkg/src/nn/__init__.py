from .params import ParamGroup
from .blocks import (
    AttentionParams,
    FeedForwardParams,
    LayerNormParams,
    EncoderBlockParams,
    DecoderBlockParams,
    positional_encoding,
    positional_encodings,
    causal_mask,
    multi_head_attention,
    encoder_block,
    transformer_stack,
    decoder_block,
    create_stack,
)

__all__ = [
    'ParamGroup',
    'AttentionParams',
    'FeedForwardParams',
    'LayerNormParams',
    'EncoderBlockParams',
    'DecoderBlockParams',
    'positional_encoding',
    'positional_encodings',
    'causal_mask',
    'multi_head_attention',
    'encoder_block',
    'transformer_stack',
    'decoder_block',
    'create_stack'
]

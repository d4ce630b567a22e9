from .hmnet import (
    HMNetParams,
    HMNetModel,
    EncodedMeeting,
    embed_tokens,
    embed_token,
    encode_turn,
    encode_meeting,
    decoder_forward,
    compute_loss,
    sized_config,
)
from .summarizer import HMNetSummarizer

__all__ = [
    'HMNetParams',
    'HMNetModel',
    'EncodedMeeting',
    'embed_tokens',
    'embed_token',
    'encode_turn',
    'encode_meeting',
    'decoder_forward',
    'compute_loss',
    'sized_config',
    'HMNetSummarizer'
]

"""Hierarchical meeting summarizer: word-level and turn-level encoders, dual-memory decoder."""
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.config import ModelConfig
from src.data.features import Featurizer, MeetingFeatures, TurnFeatures
from src.data.vocab import BOS_ID
from src.exceptions import (
    EmptyMeeting, EmptyPrefix, EmptyTurn, IdOutOfRange, MeetingTooLong,
    PrefixTooLong, TargetTooShort, TurnTooLong, UnknownRole,
)
from src.interfaces.iscorer import INextTokenScorer
from src.nn import DecoderBlockParams, EncoderBlockParams, ParamGroup, create_stack, decoder_block, transformer_stack
from src.nn.blocks import positional_encodings
from src.nn.params import embedding
from src.tensor import EVAL, RunMode, Tensor, concat, cross_entropy, dropout, reshape, take_rows, transpose

# Tag id 0 is the NONE tag in every TagVocab.
NONE_TAG_ID = 0


@dataclass
class HMNetParams(ParamGroup):
    """
    All learned weights.

    ``embedding`` (D) is used both to embed tokens and, transposed, as the
    output projection; there is no separate output matrix.
    """
    embedding: Tensor
    pos_embedding: Tensor
    ent_embedding: Tensor
    role_table: Tensor
    word_stack: List[EncoderBlockParams]
    turn_stack: List[EncoderBlockParams]
    decoder: List[DecoderBlockParams]

    @classmethod
    def create(cls, cfg: ModelConfig, seed: int = 0) -> "HMNetParams":
        rng = np.random.default_rng(seed)
        if cfg.use_role_vectors:
            roles = embedding(rng, cfg.n_roles, cfg.d_role)
        else:
            # Ablation: every role maps to the same fixed zero vector.
            roles = Tensor(np.zeros((cfg.n_roles, cfg.d_role)))
        # Without the turn level, the word stack reads [token; POS; ENT; role].
        word_width = cfg.d_word_model if cfg.use_hierarchy else cfg.d_turn_model
        return cls(
            embedding=embedding(rng, cfg.vocab_size, cfg.d_word),
            pos_embedding=embedding(rng, cfg.n_pos_tags, cfg.d_pos),
            ent_embedding=embedding(rng, cfg.n_ent_tags, cfg.d_ent),
            role_table=roles,
            word_stack=create_stack(cfg.n_layers, word_width, cfg.n_heads, cfg.ffn_multiplier, rng),
            turn_stack=(
                create_stack(cfg.n_layers, cfg.d_turn_model, cfg.n_heads, cfg.ffn_multiplier, rng)
                if cfg.use_hierarchy else []
            ),
            decoder=[
                DecoderBlockParams.create(
                    cfg.d_decoder, word_width, cfg.d_turn_model if cfg.use_hierarchy else None,
                    cfg.n_heads, cfg.ffn_multiplier, rng,
                )
                for _ in range(cfg.n_layers)
            ],
        )

    def trainable(self) -> List[Tuple[str, Tensor]]:
        return [(name, p) for name, p in self.named_parameters() if p.requires_grad]


@dataclass
class EncodedMeeting:
    """
    Attributes:
        word_memory: Word-level outputs of every non-BOS token, turns concatenated
        turn_memory: Turn-level outputs, one row per turn; None without the turn level
        turn_of_origin: Turn index of each word_memory row (diagnostics only)
    """
    word_memory: Tensor
    turn_memory: Optional[Tensor]
    turn_of_origin: List[int]


def _check_ids(ids: Sequence[int], size: int, what: str) -> None:
    for i in ids:
        if not 0 <= i < size:
            raise IdOutOfRange(f"{what} id {i} outside [0, {size})")


def embed_tokens(
    token_ids: Sequence[int], pos_ids: Sequence[int], ent_ids: Sequence[int], params: HMNetParams
) -> Tensor:
    """Rows [D(token); POS(tag); ENT(tag)] for a sequence of positions."""
    _check_ids(token_ids, params.embedding.shape[0], "token")
    _check_ids(pos_ids, params.pos_embedding.shape[0], "POS tag")
    _check_ids(ent_ids, params.ent_embedding.shape[0], "ENT tag")
    return concat([
        take_rows(params.embedding, token_ids),
        take_rows(params.pos_embedding, pos_ids),
        take_rows(params.ent_embedding, ent_ids),
    ], axis=1)


def embed_token(token_id: int, pos_id: int, ent_id: int, params: HMNetParams) -> Tensor:
    return embed_tokens([token_id], [pos_id], [ent_id], params)[0]


def _checked_length(turn: TurnFeatures, cfg: ModelConfig) -> int:
    length = len(turn.token_ids)
    if length == 0:
        raise EmptyTurn("a turn needs at least one token")
    if length > cfg.max_turn_tokens:
        raise TurnTooLong(f"turn has {length} tokens, limit is {cfg.max_turn_tokens}")
    return length


def encode_turn(
    turn: TurnFeatures, params: HMNetParams, cfg: ModelConfig, mode: RunMode = EVAL
) -> Tuple[Tensor, Tensor]:
    """
    Run the word-level stack over [BOS] + the turn's tokens.

    Returns:
        (BOS output [d_word_model], token outputs [L x d_word_model])
    """
    length = _checked_length(turn, cfg)
    x = embed_tokens(
        [BOS_ID] + list(turn.token_ids),
        [NONE_TAG_ID] + list(turn.pos_ids),
        [NONE_TAG_ID] + list(turn.ent_ids),
        params,
    )
    x = dropout(x + positional_encodings(length + 1, cfg.d_word_model), cfg.dropout, mode)
    out = transformer_stack(x, params.word_stack, None, mode, cfg.dropout)
    return out[0], out[1:]


def encode_meeting(
    meeting: MeetingFeatures, params: HMNetParams, cfg: ModelConfig, mode: RunMode = EVAL
) -> EncodedMeeting:
    """
    Encode each turn independently, then run the turn-level stack over [BOS_i; r_p_i].

    With ``use_hierarchy`` off the transcript is encoded in one word-level pass
    and ``turn_memory`` is None.
    """
    n_turns = len(meeting.turns)
    if n_turns == 0:
        raise EmptyMeeting(f"meeting {meeting.meeting_id} has no turns")
    if n_turns > cfg.max_turns:
        raise MeetingTooLong(f"meeting has {n_turns} turns, limit is {cfg.max_turns}")
    role_ids = [turn.role_id for turn in meeting.turns]
    for role_id in role_ids:
        if not 0 <= role_id < params.role_table.shape[0]:
            raise UnknownRole(f"role id {role_id} has no role vector")
    if not cfg.use_hierarchy:
        return _encode_flat(meeting, role_ids, params, cfg, mode)

    bos_rows, token_blocks, origin = [], [], []
    for i, turn in enumerate(meeting.turns):
        bos_out, token_outs = encode_turn(turn, params, cfg, mode)
        bos_rows.append(bos_out)
        token_blocks.append(token_outs)
        origin.extend([i] * token_outs.shape[0])

    bos = concat([reshape(row, (1, row.shape[0])) for row in bos_rows], axis=0)
    turn_inputs = concat([bos, take_rows(params.role_table, role_ids)], axis=1)
    turn_inputs = dropout(turn_inputs + positional_encodings(n_turns, cfg.d_turn_model), cfg.dropout, mode)
    turn_memory = transformer_stack(turn_inputs, params.turn_stack, None, mode, cfg.dropout)
    return EncodedMeeting(
        word_memory=concat(token_blocks, axis=0),
        turn_memory=turn_memory,
        turn_of_origin=origin,
    )


def _encode_flat(
    meeting: MeetingFeatures, role_ids: List[int], params: HMNetParams, cfg: ModelConfig, mode: RunMode
) -> EncodedMeeting:
    """One word-level pass over the whole transcript; each token carries its speaker's role vector."""
    token_ids, pos_ids, ent_ids, token_roles, origin = [], [], [], [], []
    for i, (turn, role_id) in enumerate(zip(meeting.turns, role_ids)):
        length = _checked_length(turn, cfg)
        token_ids.extend(turn.token_ids)
        pos_ids.extend(turn.pos_ids)
        ent_ids.extend(turn.ent_ids)
        token_roles.extend([role_id] * length)
        origin.extend([i] * length)

    x = concat([
        embed_tokens(token_ids, pos_ids, ent_ids, params),
        take_rows(params.role_table, token_roles),
    ], axis=1)
    x = dropout(x + positional_encodings(len(token_ids), cfg.d_turn_model), cfg.dropout, mode)
    memory = transformer_stack(x, params.word_stack, None, mode, cfg.dropout)
    return EncodedMeeting(word_memory=memory, turn_memory=None, turn_of_origin=origin)


def decoder_forward(
    prev_ids: Sequence[int],
    enc: EncodedMeeting,
    params: HMNetParams,
    cfg: ModelConfig,
    mode: RunMode = EVAL,
) -> Tensor:
    """
    Teacher-forced decoder pass.

    Returns:
        [(k-1) x vocab_size] pre-softmax scores; row t scores the token after prev_ids[t]
    """
    if len(prev_ids) == 0:
        raise EmptyPrefix("decoder needs at least the <begin> token")
    if len(prev_ids) > cfg.max_summary_tokens:
        raise PrefixTooLong(f"prefix has {len(prev_ids)} tokens, limit is {cfg.max_summary_tokens}")
    _check_ids(prev_ids, params.embedding.shape[0], "token")

    x = take_rows(params.embedding, prev_ids)
    x = dropout(x + positional_encodings(len(prev_ids), cfg.d_decoder), cfg.dropout, mode)
    for block in params.decoder:
        x = decoder_block(x, enc.word_memory, enc.turn_memory, block, mode, cfg.dropout)
    return x @ transpose(params.embedding)


def compute_loss(
    meeting: MeetingFeatures,
    target_ids: Sequence[int],
    params: HMNetParams,
    cfg: ModelConfig,
    mode: RunMode = EVAL,
) -> Tensor:
    """Mean negative log-likelihood of target_ids[1:] given target_ids[:-1] and the meeting."""
    if len(target_ids) < 2:
        raise TargetTooShort("target needs at least <begin> and <end>")
    enc = encode_meeting(meeting, params, cfg, mode)
    logits = decoder_forward(list(target_ids[:-1]), enc, params, cfg, mode)
    return cross_entropy(logits, list(target_ids[1:]))


class HMNetModel(INextTokenScorer):
    """Parameters plus the vocabularies and config needed to run them."""

    def __init__(self, params: HMNetParams, config: ModelConfig, featurizer: Featurizer,
                 seed: int = 0):
        self.params = params
        self.config = config
        self.featurizer = featurizer
        self.rng = np.random.default_rng(seed)

    @classmethod
    def create(cls, config: ModelConfig, featurizer: Featurizer, seed: int = 0) -> "HMNetModel":
        """Size the config's vocabulary fields from the featurizer and initialize weights."""
        config = sized_config(config, featurizer)
        return cls(HMNetParams.create(config, seed), config, featurizer, seed)

    def train_mode(self) -> RunMode:
        return RunMode(training=True, rng=self.rng)

    def loss(self, meeting: MeetingFeatures, mode: Optional[RunMode] = None) -> Tensor:
        return compute_loss(meeting, meeting.summary_ids, self.params, self.config, mode or EVAL)

    def encode(self, meeting: MeetingFeatures) -> EncodedMeeting:
        return encode_meeting(meeting, self.params, self.config, EVAL)

    def next_token_logits(self, prefix: Sequence[int], enc: EncodedMeeting) -> np.ndarray:
        """Scores for the token following ``prefix`` (eval mode)."""
        return decoder_forward(prefix, enc, self.params, self.config, EVAL).values[-1]


def sized_config(config: ModelConfig, featurizer: Featurizer) -> ModelConfig:
    return replace(
        config,
        vocab_size=len(featurizer.vocab),
        n_roles=len(featurizer.roles),
        n_pos_tags=len(featurizer.pos_vocab),
        n_ent_tags=len(featurizer.ent_vocab),
    )

import math
from dataclasses import replace

import numpy as np
import pytest

from src.config import ModelConfig
from src.data import BEGIN_ID, END_ID
from src.data.features import MeetingFeatures, TurnFeatures
from src.exceptions import (
    EmptyMeeting, EmptyPrefix, EmptyTurn, IdOutOfRange, MeetingTooLong, PrefixTooLong, ShapeMismatch,
    TargetTooShort, TurnTooLong,
)
from src.model import HMNetModel, HMNetParams, compute_loss, decoder_forward, encode_meeting, encode_turn
from src.tensor import Tensor

def _turn(n_tokens, role_id=0):
    return TurnFeatures(role_id=role_id, token_ids=[5] * n_tokens, pos_ids=[0] * n_tokens, ent_ids=[0] * n_tokens)

def test_default_widths():
    cfg = ModelConfig()
    assert (cfg.d_word_model, cfg.d_turn_model, cfg.d_decoder) == (544, 576, 512)

def test_encoder_output_shapes(tiny_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[0])
    enc = tiny_model.encode(features)
    n_tokens = sum(len(t.token_ids) for t in features.turns)
    assert enc.word_memory.shape == (n_tokens, 24)
    assert enc.turn_memory.shape == (len(features.turns), 32)
    assert enc.turn_of_origin[0] == 0
    assert enc.turn_of_origin[-1] == len(features.turns) - 1

def test_encode_turn_returns_bos_and_tokens(tiny_model):
    bos, tokens = encode_turn(_turn(5), tiny_model.params, tiny_model.config)
    assert bos.shape == (24,)
    assert tokens.shape == (5, 24)

def test_uniform_logits_give_log_vocab(mocker, tiny_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[0])
    vocab_size = len(featurizer.vocab)
    mocker.patch("src.model.hmnet.decoder_forward",
                 side_effect=lambda prev, *args, **kwargs: Tensor(np.zeros((len(prev), vocab_size))))
    loss = tiny_model.loss(features)
    assert loss.item() == pytest.approx(math.log(vocab_size), abs=1e-9)

def test_rigged_logits_give_zero_loss(mocker, tiny_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[1])
    targets = features.summary_ids[1:]
    logits = np.zeros((len(targets), len(featurizer.vocab)))
    logits[np.arange(len(targets)), targets] = 1000.0
    mocker.patch("src.model.hmnet.decoder_forward", return_value=Tensor(logits))
    assert tiny_model.loss(features).item() == pytest.approx(0.0, abs=1e-9)

def test_decoder_is_causal(tiny_model, featurizer, toy_meetings):
    rng = np.random.default_rng(0)
    enc = tiny_model.encode(featurizer.featurize(toy_meetings[2]))
    vocab_size = len(featurizer.vocab)
    for _ in range(20):
        length = int(rng.integers(2, 8))
        prefix = [BEGIN_ID] + [int(t) for t in rng.integers(5, vocab_size, size=length - 1)]
        cut = int(rng.integers(1, length))
        full = decoder_forward(prefix, enc, tiny_model.params, tiny_model.config).values
        partial = decoder_forward(prefix[:cut], enc, tiny_model.params, tiny_model.config).values
        np.testing.assert_allclose(full[:cut], partial, atol=1e-10)

def test_next_token_logits_is_last_row(tiny_model, featurizer, toy_meetings):
    enc = tiny_model.encode(featurizer.featurize(toy_meetings[0]))
    prefix = [BEGIN_ID, 7, 9]
    rows = decoder_forward(prefix, enc, tiny_model.params, tiny_model.config).values
    np.testing.assert_array_equal(tiny_model.next_token_logits(prefix, enc), rows[-1])

def test_loss_backward_reaches_every_trainable_parameter(tiny_model, featurizer, toy_meetings):
    tiny_model.loss(featurizer.featurize(toy_meetings[0])).backward()
    missing = [name for name, p in tiny_model.params.trainable() if p.grad is None]
    assert missing == []

@pytest.mark.parametrize("turns, error", [
    ([_turn(0)], EmptyTurn),
    ([_turn(17)], TurnTooLong),
    ([], EmptyMeeting),
    ([_turn(2)] * 9, MeetingTooLong),
])
def test_encoder_rejects_bad_meetings(tiny_model, turns, error):
    with pytest.raises(error):
        encode_meeting(MeetingFeatures("m", turns, [BEGIN_ID, END_ID]), tiny_model.params, tiny_model.config)

def test_decoder_errors(tiny_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[0])
    enc = tiny_model.encode(features)
    with pytest.raises(EmptyPrefix):
        decoder_forward([], enc, tiny_model.params, tiny_model.config)
    with pytest.raises(IdOutOfRange):
        decoder_forward([BEGIN_ID, len(featurizer.vocab)], enc, tiny_model.params, tiny_model.config)
    with pytest.raises(TargetTooShort):
        compute_loss(features, [BEGIN_ID], tiny_model.params, tiny_model.config)

def test_decoder_prefix_limit(tiny_model, featurizer, toy_meetings):
    enc = tiny_model.encode(featurizer.featurize(toy_meetings[0]))
    at_limit = [BEGIN_ID] + [7] * 15
    assert decoder_forward(at_limit, enc, tiny_model.params, tiny_model.config).shape == (16, len(featurizer.vocab))
    with pytest.raises(PrefixTooLong):
        decoder_forward(at_limit + [7], enc, tiny_model.params, tiny_model.config)

def test_role_ablation_makes_roles_interchangeable(tiny_model_config, featurizer, toy_meetings):
    model = HMNetModel.create(replace(tiny_model_config, use_role_vectors=False), featurizer, seed=0)
    assert "role_table" not in {name for name, _ in model.params.trainable()}
    features = featurizer.featurize(toy_meetings[0])
    swapped = replace(features, turns=[replace(t, role_id=(t.role_id + 1) % len(featurizer.roles))
                                       for t in features.turns])
    np.testing.assert_allclose(model.encode(features).turn_memory.values,
                               model.encode(swapped).turn_memory.values)

def test_role_vectors_change_turn_memory(tiny_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[0])
    swapped = replace(features, turns=[replace(t, role_id=(t.role_id + 1) % len(featurizer.roles))
                                       for t in features.turns])
    assert not np.allclose(tiny_model.encode(features).turn_memory.values,
                           tiny_model.encode(swapped).turn_memory.values)

def test_create_sizes_config_from_featurizer(tiny_model, featurizer):
    assert tiny_model.config.vocab_size == len(featurizer.vocab)
    assert tiny_model.params.embedding.shape == (len(featurizer.vocab), 16)
    assert tiny_model.params.role_table.shape == (len(featurizer.roles), 8)

def test_same_seed_same_weights(tiny_model_config, featurizer):
    first = HMNetModel.create(tiny_model_config, featurizer, seed=4).params.state_dict()
    second = HMNetModel.create(tiny_model_config, featurizer, seed=4).params.state_dict()
    assert first.keys() == second.keys()
    assert all(np.array_equal(first[k], second[k]) for k in first)

def test_params_state_dict_names_are_dotted(tiny_model):
    names = [name for name, _ in tiny_model.params.named_parameters()]
    assert "embedding" in names
    assert any(name.startswith("decoder.1.") for name in names)
    assert isinstance(tiny_model.params, HMNetParams)

@pytest.fixture
def flat_model(tiny_model_config, featurizer):
    return HMNetModel.create(replace(tiny_model_config, use_hierarchy=False), featurizer, seed=0)

def test_flat_encoder_has_no_turn_level(flat_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[0])
    enc = flat_model.encode(features)
    n_tokens = sum(len(t.token_ids) for t in features.turns)
    assert enc.turn_memory is None
    assert enc.word_memory.shape == (n_tokens, 32)
    assert enc.turn_of_origin == [i for i, t in enumerate(features.turns) for _ in t.token_ids]
    names = [name for name, _ in flat_model.params.named_parameters()]
    assert not any(name.startswith("turn_stack.") for name in names)
    assert not any(".turn_attention." in name or ".norm3." in name for name in names)

def test_flat_encoder_carries_role_vectors(flat_model, featurizer, toy_meetings):
    features = featurizer.featurize(toy_meetings[0])
    swapped = replace(features, turns=[replace(t, role_id=(t.role_id + 1) % len(featurizer.roles))
                                       for t in features.turns])
    assert not np.allclose(flat_model.encode(features).word_memory.values,
                           flat_model.encode(swapped).word_memory.values)

def test_flat_loss_reaches_every_trainable_parameter(flat_model, featurizer, toy_meetings):
    loss = flat_model.loss(featurizer.featurize(toy_meetings[0]))
    assert np.isfinite(loss.item())
    loss.backward()
    missing = [name for name, p in flat_model.params.trainable() if p.grad is None]
    assert missing == []

def test_flat_decoder_is_causal(flat_model, featurizer, toy_meetings):
    enc = flat_model.encode(featurizer.featurize(toy_meetings[1]))
    prefix = [BEGIN_ID, 7, 9, 11, 6]
    full = decoder_forward(prefix, enc, flat_model.params, flat_model.config).values
    partial = decoder_forward(prefix[:3], enc, flat_model.params, flat_model.config).values
    np.testing.assert_allclose(full[:3], partial, atol=1e-10)

def test_flat_encoder_rejects_bad_turns(flat_model):
    with pytest.raises(EmptyTurn):
        encode_meeting(MeetingFeatures("m", [_turn(2), _turn(0)], [BEGIN_ID, END_ID]),
                       flat_model.params, flat_model.config)
    with pytest.raises(TurnTooLong):
        encode_meeting(MeetingFeatures("m", [_turn(17)], [BEGIN_ID, END_ID]),
                       flat_model.params, flat_model.config)

def test_hierarchical_decoder_rejects_missing_turn_memory(tiny_model, featurizer, toy_meetings):
    enc = tiny_model.encode(featurizer.featurize(toy_meetings[0]))
    with pytest.raises(ShapeMismatch):
        decoder_forward([BEGIN_ID], replace(enc, turn_memory=None), tiny_model.params, tiny_model.config)

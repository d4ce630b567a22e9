import pytest
from pathlib import Path

from src.config import ModelConfig
from src.data import Featurizer, build_role_table, build_tag_vocabs, build_vocab, synthetic_meetings
from src.model import HMNetModel

CONFIG_DIR = Path(__file__).resolve().parents[1] / "config"

@pytest.fixture
def toy_config_path():
    return str(CONFIG_DIR / "toy.yaml")

@pytest.fixture
def toy_meetings():
    return synthetic_meetings(8, seed=3)

@pytest.fixture
def featurizer(toy_meetings):
    pos_vocab, ent_vocab = build_tag_vocabs(toy_meetings)
    return Featurizer(build_vocab(toy_meetings), pos_vocab, ent_vocab, build_role_table(toy_meetings))

@pytest.fixture
def tiny_model_config():
    return ModelConfig(
        n_layers=2, n_heads=2, d_word=16, d_pos=4, d_ent=4, d_role=8,
        ffn_multiplier=2, dropout=0.0,
        max_turn_tokens=16, max_turns=8, max_summary_tokens=16,
    )

@pytest.fixture
def tiny_model(tiny_model_config, featurizer):
    return HMNetModel.create(tiny_model_config, featurizer, seed=0)

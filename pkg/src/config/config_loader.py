from dataclasses import dataclass, field, fields, asdict, is_dataclass
from typing import List, Dict, Any, Optional, Sequence, Union, get_args, get_origin
import logging
import yaml
from pathlib import Path

from src.exceptions import ConfigParseError, ValidationError

logger = logging.getLogger(__name__)

@dataclass
class ModelConfig:
    n_layers: int = 6
    n_heads: int = 8
    d_word: int = 512
    d_pos: int = 16
    d_ent: int = 16
    d_role: int = 32
    ffn_multiplier: int = 4
    dropout: float = 0.1
    vocab_size: int = 0
    n_roles: int = 0
    n_pos_tags: int = 0
    n_ent_tags: int = 0
    max_turn_tokens: int = 256
    max_turns: int = 300
    max_summary_tokens: int = 512
    use_role_vectors: bool = True
    # False removes the turn-level stack; role vectors then join every word embedding.
    use_hierarchy: bool = True
    # Optional explicit widths; when set they must agree with the derived chain.
    word_d_model: Optional[int] = None
    turn_d_model: Optional[int] = None
    decoder_d_model: Optional[int] = None

    @property
    def d_word_model(self) -> int:
        """Word-level transformer width: [token; POS; ENT]."""
        return self.d_word + self.d_pos + self.d_ent

    @property
    def d_turn_model(self) -> int:
        """Turn-level transformer width: [BOS output; role vector]."""
        return self.d_word_model + self.d_role

    @property
    def d_decoder(self) -> int:
        return self.d_word

@dataclass
class TrainConfig:
    warmup_steps: int = 16000
    peak_lr: float = 0.001
    initial_lr: float = 1e-9
    clip_norm: float = 2.0
    accumulation_steps: int = 16
    max_steps: int = 300000
    checkpoint_every: int = 1000
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

@dataclass
class DecodeConfig:
    beam_size: int = 6
    min_len: int = 400
    max_len: int = 512
    trigram_blocking: bool = True

@dataclass
class DataConfig:
    min_freq: int = 1
    max_vocab_size: int = 50000
    articles_per_meeting: int = 4

@dataclass
class EvalConfig:
    oracle_k: int = 18
    copy_trials: int = 50
    random_trials: int = 50
    grid_min_lens: List[int] = field(default_factory=lambda: [240, 280, 320, 360, 400, 440])
    grid_beam_sizes: List[int] = field(default_factory=lambda: [1, 3, 6, 8, 9, 10])
    grid_stage1_beam: int = 3

@dataclass
class PathsConfig:
    articles: Optional[str] = None
    pretrain_data: Optional[str] = None
    train_data: Optional[str] = None
    dev_data: Optional[str] = None
    test_data: Optional[str] = None
    role_table: Optional[str] = None
    checkpoint_dir: str = "checkpoints"
    pretrained_checkpoint: Optional[str] = None
    model_checkpoint: Optional[str] = None
    summaries: Optional[str] = None
    train_log: str = "logs/train.jsonl"

@dataclass
class LoggingConfig:
    level: str = "INFO"
    file_path: str = "logs/hmnet.log"
    max_bytes: int = 10 * 1024 * 1024
    backup_count: int = 5

@dataclass
class RunConfig:
    profile: str = "toy"
    seed: int = 0
    model: ModelConfig = field(default_factory=ModelConfig)
    pretrain: TrainConfig = field(default_factory=TrainConfig)
    finetune: TrainConfig = field(default_factory=lambda: TrainConfig(peak_lr=0.0001))
    decode: DecodeConfig = field(default_factory=DecodeConfig)
    data: DataConfig = field(default_factory=DataConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

SECTIONS = ("model", "pretrain", "finetune", "decode", "data", "eval", "paths", "logging")

class ConfigLoader:
    @staticmethod
    def load(config_path: str = "config/toy.yaml", overrides: Sequence[str] = ()) -> RunConfig:
        """
        Load a run configuration from YAML, apply ``key=value`` overrides and validate

        Args:
            config_path: YAML profile file
            overrides: ``section.key=value`` or unambiguous bare ``key=value`` strings

        Returns:
            Validated RunConfig

        Raises:
            ConfigParseError: Missing or unparsable file, malformed override
            ValidationError: Unknown key or constraint violation, naming the key
        """
        config_file = Path(config_path)
        if not config_file.exists():
            raise ConfigParseError(f"Configuration file not found: {config_path}")

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                config_dict = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigParseError(f"Cannot parse {config_path}: {e}") from e
        if not isinstance(config_dict, dict):
            raise ConfigParseError(f"{config_path} must contain a mapping at top level")

        for override in overrides:
            ConfigLoader.apply_override(config_dict, override)

        config = ConfigLoader.from_dict(config_dict)
        ConfigLoader.validate(config)
        return config

    @staticmethod
    def from_dict(config_dict: Dict[str, Any]) -> RunConfig:
        """Convert a nested dictionary into dataclass instances, rejecting unknown keys"""
        top_level = {f.name for f in fields(RunConfig)}
        for key in config_dict:
            if key not in top_level:
                raise ValidationError(key, "unknown configuration key")

        sections = {
            name: _build_section(type(getattr(RunConfig(), name)), config_dict.get(name) or {}, name)
            for name in SECTIONS
        }
        return RunConfig(
            profile=_coerce(config_dict.get("profile", "toy"), str, "profile"),
            seed=_coerce(config_dict.get("seed", 0), int, "seed"),
            **sections
        )

    @staticmethod
    def apply_override(config_dict: Dict[str, Any], override: str) -> None:
        """Apply one ``key=value`` override in place"""
        if "=" not in override:
            raise ConfigParseError(f"Override must look like key=value, got {override!r}")
        key, raw = override.split("=", 1)
        key = key.strip()
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as e:
            raise ConfigParseError(f"Cannot parse value of override {key}: {e}") from e

        if key in ("profile", "seed"):
            config_dict[key] = value
            return

        if "." in key:
            section, name = key.split(".", 1)
        else:
            owners = [s for s in SECTIONS if name_in_section(s, key)]
            if not owners:
                raise ValidationError(key, "unknown configuration key")
            if len(owners) > 1:
                raise ValidationError(key, f"ambiguous key, qualify it with one of {owners}")
            section, name = owners[0], key

        if section not in SECTIONS or not name_in_section(section, name):
            raise ValidationError(key, "unknown configuration key")
        config_dict.setdefault(section, {})
        if config_dict[section] is None:
            config_dict[section] = {}
        config_dict[section][name] = value

    @staticmethod
    def validate(config: RunConfig) -> None:
        """Validate numeric constraints and the word -> turn -> decoder width chain"""
        m = config.model
        for key in ("n_layers", "n_heads", "d_word", "d_pos", "d_ent", "d_role",
                    "ffn_multiplier", "max_turn_tokens", "max_turns", "max_summary_tokens"):
            _require(getattr(m, key) > 0, f"model.{key}", "must be positive")
        _require(0.0 <= m.dropout < 1.0, "model.dropout", "must lie in [0, 1)")
        for key, derived in (("word_d_model", m.d_word_model),
                             ("turn_d_model", m.d_turn_model),
                             ("decoder_d_model", m.d_decoder)):
            explicit = getattr(m, key)
            _require(explicit is None or explicit == derived, f"model.{key}",
                     f"must equal {derived} from the width chain, got {explicit}")
        for key, width in (("d_word", m.d_word), ("word_d_model", m.d_word_model),
                           ("turn_d_model", m.d_turn_model)):
            _require(width % 2 == 0, f"model.{key}", f"width {width} must be even")
            _require(width % m.n_heads == 0, f"model.{key}",
                     f"width {width} must be divisible by n_heads={m.n_heads}")

        for section in ("pretrain", "finetune"):
            t = getattr(config, section)
            for key in ("warmup_steps", "peak_lr", "initial_lr", "clip_norm",
                        "accumulation_steps", "max_steps", "checkpoint_every", "eps"):
                _require(getattr(t, key) > 0, f"{section}.{key}", "must be positive")
            _require(t.initial_lr <= t.peak_lr, f"{section}.initial_lr", "must not exceed peak_lr")
            for key in ("beta1", "beta2"):
                _require(0.0 < getattr(t, key) < 1.0, f"{section}.{key}", "must lie in (0, 1)")

        d = config.decode
        _require(d.beam_size >= 1, "decode.beam_size", "must be at least 1")
        _require(d.min_len >= 0, "decode.min_len", "must be non-negative")
        _require(d.min_len < d.max_len, "decode.min_len", "must be smaller than max_len")
        _require(d.max_len <= m.max_summary_tokens, "decode.max_len",
                 f"must not exceed model.max_summary_tokens={m.max_summary_tokens}")
        _require(all(n < m.max_summary_tokens for n in config.eval.grid_min_lens), "eval.grid_min_lens",
                 f"every value must be below model.max_summary_tokens={m.max_summary_tokens}")

        _require(config.data.min_freq >= 1, "data.min_freq", "must be at least 1")
        _require(config.data.articles_per_meeting >= 1, "data.articles_per_meeting", "must be at least 1")
        _require(config.eval.oracle_k >= 1, "eval.oracle_k", "must be at least 1")
        _require(config.eval.copy_trials >= 1, "eval.copy_trials", "must be at least 1")
        _require(config.eval.random_trials >= 1, "eval.random_trials", "must be at least 1")
        _require(is_log_level(config.logging.level), "logging.level",
                 f"unknown level {config.logging.level}")

    @staticmethod
    def validate_paths(config: RunConfig, keys: Sequence[str]) -> None:
        """Validate that the input files a command reads exist"""
        for key in keys:
            value = getattr(config.paths, key)
            if not value:
                raise ValidationError(f"paths.{key}", "is required for this command")
            if not Path(value).exists():
                raise ValidationError(f"paths.{key}", f"file not found: {value}")

    @staticmethod
    def dump(config: RunConfig) -> str:
        """Render the effective configuration as YAML"""
        return yaml.safe_dump(asdict(config), sort_keys=False)

def name_in_section(section: str, key: str) -> bool:
    return key in {f.name for f in fields(type(getattr(RunConfig(), section)))}

def is_log_level(level: Any) -> bool:
    return isinstance(level, str) and isinstance(logging.getLevelName(level.upper()), int)

def _build_section(cls, values: Dict[str, Any], section: str):
    if not isinstance(values, dict):
        raise ValidationError(section, "must be a mapping")
    known = {f.name: f for f in fields(cls)}
    for key in values:
        if key not in known:
            raise ValidationError(f"{section}.{key}", "unknown configuration key")
    checked = {
        key: _coerce(value, known[key].type, f"{section}.{key}")
        for key, value in values.items()
    }
    return cls(**checked)

def _coerce(value: Any, annotation: Any, key: str) -> Any:
    if get_origin(annotation) is Union:
        if value is None:
            return None
        inner = [arg for arg in get_args(annotation) if arg is not type(None)]
        return _coerce(value, inner[0], key)
    if get_origin(annotation) in (list, List):
        if not isinstance(value, list):
            raise ValidationError(key, f"expected a list, got {value!r}")
        item_type = get_args(annotation)[0]
        return [_coerce(item, item_type, key) for item in value]
    if annotation is bool:
        if not isinstance(value, bool):
            raise ValidationError(key, f"expected true or false, got {value!r}")
        return value
    if annotation is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(key, f"expected an integer, got {value!r}")
        return value
    if annotation is float:
        # YAML reads "2" as int and "1e-9" as str; float fields accept both
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ValidationError(key, f"expected a number, got {value!r}")
        try:
            return float(value)
        except ValueError:
            raise ValidationError(key, f"expected a number, got {value!r}")
    if annotation is str:
        if isinstance(value, (dict, list)) or value is None:
            raise ValidationError(key, f"expected a string, got {value!r}")
        return str(value)
    return value

def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ValidationError(key, message)

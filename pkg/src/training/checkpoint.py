"""
Binary checkpoint format (all integers little-endian):

    b"HMN1" | uint32 version | uint64 header length | header JSON (UTF-8)
    then one record per tensor:
    uint32 name length | name (UTF-8) | uint32 ndim | uint64 * ndim shape | float64 payload

The header echoes the model and training configs, the vocabularies, and the
optimizer scalars. Tensor records cover every model parameter followed by the
optimizer moments, named ``m/<param>`` and ``v/<param>``.
"""
import json
import logging
import struct
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from src.config import ModelConfig, TrainConfig
from src.data.features import Featurizer
from src.data.vocab import RoleTable, TagVocab, Vocab
from src.exceptions import CorruptCheckpoint, VersionMismatch
from src.model.hmnet import HMNetModel, HMNetParams
from src.training.radam import RAdamState

logger = logging.getLogger(__name__)

MAGIC = b"HMN1"
FORMAT_VERSION = 1
_FLOAT = np.dtype("<f8")


@dataclass
class Checkpoint:
    model: HMNetModel
    state: RAdamState
    train_config: TrainConfig


def _tensor_record(name: str, values: np.ndarray) -> bytes:
    encoded = name.encode("utf-8")
    parts = [struct.pack("<I", len(encoded)), encoded, struct.pack("<I", values.ndim)]
    parts.extend(struct.pack("<Q", extent) for extent in values.shape)
    parts.append(np.ascontiguousarray(values, dtype=_FLOAT).tobytes())
    return b"".join(parts)


def save_checkpoint(
    model: HMNetModel, state: RAdamState, cfg: TrainConfig, path: Union[str, Path]
) -> Path:
    """Write model weights, vocabularies, optimizer state and config echo to ``path``."""
    featurizer = model.featurizer
    tensors = list(model.params.state_dict().items())
    for name in sorted(state.m):
        tensors.append((f"m/{name}", state.m[name]))
        tensors.append((f"v/{name}", state.v[name]))

    header = {
        "model": asdict(model.config),
        "train": asdict(cfg),
        "vocab": featurizer.vocab.tokens,
        "pos_tags": featurizer.pos_vocab.tags,
        "ent_tags": featurizer.ent_vocab.tags,
        "roles": featurizer.roles.roles,
        "optimizer": {
            "step": state.step,
            "beta1": state.beta1,
            "beta2": state.beta2,
            "base_lr": state.base_lr,
            "eps": state.eps,
        },
        "n_tensors": len(tensors),
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", FORMAT_VERSION))
        f.write(struct.pack("<Q", len(header_bytes)))
        f.write(header_bytes)
        for name, values in tensors:
            f.write(_tensor_record(name, values))
    logger.info(f"Saved checkpoint at step {state.step} to {path}")
    return path


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.offset + n > len(self.data):
            raise CorruptCheckpoint(
                f"checkpoint truncated at byte {self.offset} (needed {n} more bytes)"
            )
        chunk = self.data[self.offset:self.offset + n]
        self.offset += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))[0]

    def tensor(self) -> Tuple[str, np.ndarray]:
        try:
            name = self.take(self.unpack("<I")).decode("utf-8")
        except UnicodeDecodeError as e:
            raise CorruptCheckpoint(f"bad tensor name: {e}") from e
        shape = tuple(self.unpack("<Q") for _ in range(self.unpack("<I")))
        count = int(np.prod(shape, dtype=np.int64))
        values = np.frombuffer(self.take(count * _FLOAT.itemsize), dtype=_FLOAT)
        return name, values.reshape(shape).astype(np.float64)


def _config_from(cls, values: Dict):
    known = {f.name for f in fields(cls)}
    return cls(**{k: v for k, v in values.items() if k in known})


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """
    Read a checkpoint written by :func:`save_checkpoint`.

    Raises:
        VersionMismatch: Unsupported format version
        CorruptCheckpoint: Bad magic, truncated or inconsistent content
        OSError: File cannot be read
    """
    with open(path, "rb") as f:
        reader = _Reader(f.read())

    if reader.take(len(MAGIC)) != MAGIC:
        raise CorruptCheckpoint(f"{path} is not a checkpoint file")
    version = reader.unpack("<I")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"checkpoint format version {version}, expected {FORMAT_VERSION}")
    try:
        header = json.loads(reader.take(reader.unpack("<Q")).decode("utf-8"))
        model_config = _config_from(ModelConfig, header["model"])
        train_config = _config_from(TrainConfig, header["train"])
        featurizer = Featurizer(
            Vocab(header["vocab"]), TagVocab(header["pos_tags"]),
            TagVocab(header["ent_tags"]), RoleTable(header["roles"]),
        )
        optimizer = header["optimizer"]
        n_tensors = int(header["n_tensors"])
    except (ValueError, KeyError, TypeError) as e:
        raise CorruptCheckpoint(f"bad checkpoint header: {e}") from e

    tensors = dict(reader.tensor() for _ in range(n_tensors))
    if reader.offset != len(reader.data):
        raise CorruptCheckpoint(f"{len(reader.data) - reader.offset} trailing bytes in {path}")

    params = HMNetParams.create(model_config, train_config.seed)
    try:
        params.load_state_dict(tensors)
    except (KeyError, ValueError) as e:
        raise CorruptCheckpoint(str(e)) from e

    state = RAdamState(
        step=int(optimizer["step"]),
        beta1=float(optimizer["beta1"]),
        beta2=float(optimizer["beta2"]),
        base_lr=float(optimizer["base_lr"]),
        eps=float(optimizer["eps"]),
    )
    for name, values in tensors.items():
        if name.startswith("m/"):
            state.m[name[2:]] = values
        elif name.startswith("v/"):
            state.v[name[2:]] = values

    model = HMNetModel(params, model_config, featurizer, train_config.seed)
    logger.info(f"Loaded checkpoint from {path} at step {state.step}")
    return Checkpoint(model=model, state=state, train_config=train_config)

"""
Binary checkpoint codec.

Layout (all integers little-endian):

    magic        5 bytes   b"SPAN1"
    version      u16       1
    config_len   u32       byte length of the model-section snapshot
    config       UTF-8     `model.key = value` lines
    count        u32       number of parameter records
    record × count:
        name_len u16
        name     UTF-8
        rank     u8
        dims     u32 × rank
        values   float64 little-endian × prod(dims)

Trailing bytes after the last record are rejected.
"""

import logging
import struct
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np

from ..core.config_text import build_section, dump_section, parse_lines
from ..core.errors import CheckpointError, ConfigError
from ..network.config import ModelConfig
from ..network.model import SpanModel
from ..numerics.tensor import ParamTensor

logger = logging.getLogger(__name__)

MAGIC = b"SPAN1"
VERSION = 1
CONFIG_SECTION = "model"


def encode_checkpoint(model: SpanModel) -> bytes:
    """Serialize config snapshot and every parameter tensor."""
    config = dump_section(CONFIG_SECTION, model.config).encode("utf-8")
    params = model.parameters()
    chunks = [MAGIC, struct.pack("<H", VERSION), struct.pack("<I", len(config)), config,
              struct.pack("<I", len(params))]
    for p in params:
        name = p.name.encode("utf-8")
        chunks.append(struct.pack("<H", len(name)))
        chunks.append(name)
        chunks.append(struct.pack("<B", p.values.ndim))
        chunks.append(struct.pack(f"<{p.values.ndim}I", *p.values.shape))
        chunks.append(np.ascontiguousarray(p.values, dtype="<f8").tobytes())
    return b"".join(chunks)


class _Reader:
    """Cursor over checkpoint bytes that reports the failing offset."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self.data):
            raise CheckpointError(f"truncated checkpoint while reading {what}", self.offset)
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, fmt: str, what: str) -> Tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def decode_checkpoint(data: bytes) -> SpanModel:
    """
    Rebuild a model from checkpoint bytes.

    Raises:
        CheckpointError: Wrong magic or version, truncation, unknown or
            mis-shaped records, missing records, trailing bytes
    """
    reader = _Reader(data)
    magic = reader.take(len(MAGIC), "magic")
    if magic != MAGIC:
        raise CheckpointError(f"bad magic {magic!r}, expected {MAGIC!r}", 0)
    (version,) = reader.unpack("<H", "version")
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}, expected {VERSION}", reader.offset - 2)

    (config_len,) = reader.unpack("<I", "config length")
    config_offset = reader.offset
    try:
        text = reader.take(config_len, "config snapshot").decode("utf-8")
        values = {key: raw for _, section, key, raw in parse_lines(text) if section == CONFIG_SECTION}
        config = build_section(ModelConfig, values, CONFIG_SECTION)
    except (UnicodeDecodeError, ConfigError) as e:
        raise CheckpointError(f"invalid config snapshot: {e}", config_offset) from None

    model = SpanModel.initialize(config)
    expected: Dict[str, ParamTensor] = {p.name: p for p in model.parameters()}
    seen = set()

    (count,) = reader.unpack("<I", "record count")
    for _ in range(count):
        record_offset = reader.offset
        (name_len,) = reader.unpack("<H", "name length")
        try:
            name = reader.take(name_len, "parameter name").decode("utf-8")
        except UnicodeDecodeError:
            raise CheckpointError("parameter name is not UTF-8", record_offset) from None
        (rank,) = reader.unpack("<B", "rank")
        dims = reader.unpack(f"<{rank}I", f"dims of {name}") if rank else ()
        size = int(np.prod(dims, dtype=np.int64)) if dims else 1
        raw = reader.take(8 * size, f"values of {name}")

        tensor = expected.get(name)
        if tensor is None:
            raise CheckpointError(f"unknown parameter {name!r}", record_offset)
        if tuple(dims) != tensor.shape:
            raise CheckpointError(f"shape {tuple(dims)} of {name!r} does not match config {tensor.shape}", record_offset)
        tensor.assign(np.frombuffer(raw, dtype="<f8").reshape(dims))
        seen.add(name)

    missing = sorted(set(expected) - seen)
    if missing:
        raise CheckpointError(f"missing parameters: {', '.join(missing)}", reader.offset)
    if reader.offset != len(data):
        raise CheckpointError(f"{len(data) - reader.offset} trailing bytes after last record", reader.offset)
    return model


def save_model(model: SpanModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_checkpoint(model))
    logger.info(f"✅ Saved checkpoint {path} ({len(model.parameters())} tensors)")
    return path


def load_model(path: Union[str, Path]) -> SpanModel:
    """
    Raises:
        CheckpointError: If the file is corrupt (offset 0 if unreadable)
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e.strerror}", 0) from None
    model = decode_checkpoint(data)
    logger.info(f"Loaded checkpoint {path}")
    return model

"""
Run configuration: the model, train, data and eval sections of one
experiment, read from and written to `section.key = value` text.

Example file:

    # toy run
    model.layers = 3
    model.dilations = 1, 3, 9
    train.max_epochs = 20
    data.image_side = 32
    eval.transforms = identity, blur:3, noise:15
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

from lib.span_localization.core import ConfigError, build_section, dump_section, parse_lines
from lib.span_localization.datagen import DataConfig
from lib.span_localization.metrics import EvalConfig
from lib.span_localization.network import ModelConfig
from lib.span_localization.training import TrainConfig

logger = logging.getLogger(__name__)

SECTIONS = {
    "model": ModelConfig,
    "train": TrainConfig,
    "data": DataConfig,
    "eval": EvalConfig,
}


@dataclass
class RunConfig:
    """All sections of one run; every field has a documented default."""
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    data: DataConfig = field(default_factory=DataConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        """
        Raises:
            ConfigError: Unknown section or key, duplicate key, invalid value
                (the error names `section.key`)
        """
        grouped: Dict[str, Dict[str, str]] = {name: {} for name in SECTIONS}
        for number, section, key, value in parse_lines(text):
            if section not in SECTIONS:
                raise ConfigError(f"{section}.{key}", f"unknown section (line {number})")
            if key in grouped[section]:
                raise ConfigError(f"{section}.{key}", f"duplicate key (line {number})")
            grouped[section][key] = value

        sections = {}
        for name, section_cls in SECTIONS.items():
            try:
                sections[name] = build_section(section_cls, grouped[name], name)
            except ConfigError as e:
                if e.key.startswith(f"{name}."):
                    raise
                raise ConfigError(f"{name}.{e.key}", e.detail) from None
        return cls(**sections)

    @classmethod
    def load(cls, path: Optional[Union[str, Path]]) -> "RunConfig":
        """Parse a config file; None gives the defaults."""
        if path is None:
            return cls()
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError("--config", f"cannot read {path}: {e.strerror}") from None
        config = cls.parse(text)
        logger.info(f"Loaded run config from {path}")
        return config

    def section_text(self, name: str) -> str:
        return dump_section(name, getattr(self, name))

    def dump(self) -> str:
        return "\n".join(self.section_text(name) for name in SECTIONS)

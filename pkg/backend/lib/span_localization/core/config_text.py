"""
Line-oriented `section.key = value` text format for dataclass configs.

    # comment
    model.layers = 3
    model.dilations = 1, 3, 9
    model.position_mode = pp

Lists are comma separated, enums are written by value and booleans as
true/false. The same text is embedded in checkpoints as the model snapshot.
"""

import dataclasses
import typing
from enum import Enum
from typing import Any, Dict, List, Tuple, Type, TypeVar

from .errors import ConfigError

T = TypeVar("T")


def format_value(value: Any) -> str:
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(format_value(item) for item in value)
    return str(value)


def dump_section(section: str, config: Any) -> str:
    """Canonical text of one dataclass section, one key per line in field order."""
    lines = [
        f"{section}.{f.name} = {format_value(getattr(config, f.name))}"
        for f in dataclasses.fields(config)
    ]
    return "\n".join(lines) + "\n"


def parse_lines(text: str) -> List[Tuple[int, str, str, str]]:
    """
    Split config text into (line number, section, key, raw value) entries.

    Raises:
        ConfigError: On a line that is not `section.key = value`
    """
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}", f"expected 'section.key = value', got {raw.strip()!r}")
        name, value = (part.strip() for part in line.split("=", 1))
        if name.count(".") != 1:
            raise ConfigError(name or f"line {number}", "key must have the form section.key")
        section, key = name.split(".")
        entries.append((number, section, key, value))
    return entries


def _coerce(key: str, annotation: Any, raw: str) -> Any:
    origin = typing.get_origin(annotation)
    if origin in (list, List):
        (item_type,) = typing.get_args(annotation) or (str,)
        items = [item.strip() for item in raw.split(",") if item.strip()]
        return [_coerce(key, item_type, item) for item in items]
    try:
        if annotation is bool:
            lowered = raw.lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return lowered in ("true", "1", "yes")
        if isinstance(annotation, type) and issubclass(annotation, Enum):
            return annotation(raw.strip().lower())
        if annotation is int:
            return int(raw)
        if annotation is float:
            return float(raw)
    except ValueError:
        raise ConfigError(key, f"invalid value {raw!r}") from None
    return raw


def build_section(cls: Type[T], values: Dict[str, str], section: str = "") -> T:
    """
    Instantiate dataclass `cls` from raw string values; missing keys keep defaults.

    Raises:
        ConfigError: Unknown key or unparsable value (names the key)
    """
    hints = typing.get_type_hints(cls)
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, raw in values.items():
        qualified = f"{section}.{key}" if section else key
        if key not in known:
            raise ConfigError(qualified, "unknown key")
        kwargs[key] = _coerce(qualified, hints[key], raw)
    return cls(**kwargs)

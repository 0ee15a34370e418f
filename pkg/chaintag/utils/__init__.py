"""
Utilities package for chaintag: run configuration.
"""

import logging
import os
from typing import Any, Dict, Iterator, Optional, Tuple

import yaml

from ..errors import ConfigError

logger = logging.getLogger(__name__)

# keys whose default is None, with the type their values take
_OPTIONAL_TYPES = {"training.clip_norm": float, "training.metric": str}


class ConfigLoader:
    """Run configuration: defaults < config file < command-line flags."""

    def __init__(self):
        self._config: Dict[str, Any] = {}
        self._load_default_config()

    def _load_default_config(self):
        self._config = {
            "model": {
                "variant": "crf-xo",
                "encoder": "identity",
                "embedding_dim": 300,
                "lstm_hidden": 300,
                "potential_hidden": 600,
                "trainable_embeddings": False,
                "lowercase": False,
            },
            "training": {
                "batch_size": 128,
                "lr": 0.001,
                "momentum": 0.9,
                "max_iters": 100_000,
                "eval_every": 1000,
                "patience": 10,
                "workers": 1,
                "metric": None,
                "clip_norm": None,
                "weight_decay": 0.0,
                "dropout": 0.0,
            },
            "data": {
                "scheme": "raw",
                "valid_size": 1000,
                "word_column": 0,
                "label_column": -1,
            },
            "paths": {
                "train": None,
                "valid": None,
                "test": None,
                "embeddings": None,
                "contextual_embeddings": None,
                "valid_contextual_embeddings": None,
                "checkpoint": None,
                "out": None,
            },
            "run": {"seed": 0},
        }

    def keys(self) -> Iterator[str]:
        for section, values in self._config.items():
            for key in values:
                yield f"{section}.{key}"

    def resolve(self, key: str) -> str:
        """Full dotted key for ``key``; a bare leaf name works when unique."""
        if "." in key:
            section, leaf = key.split(".", 1)
            if section in self._config and leaf in self._config[section]:
                return key
            raise ConfigError(f"unknown configuration key {key!r}")
        matches = [k for k in self.keys() if k.split(".", 1)[1] == key]
        if len(matches) != 1:
            raise ConfigError(f"unknown configuration key {key!r}")
        return matches[0]

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by dot notation key"""
        keys = key.split(".")
        value = self._config
        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> None:
        """Set a known key, coercing strings to the default's type."""
        full = self.resolve(key)
        section, leaf = full.split(".", 1)
        self._config[section][leaf] = self._coerce(full, value)

    def _coerce(self, key: str, value: Any) -> Any:
        if value is None or not isinstance(value, str):
            return value
        current = self.get(key)
        kind = type(current) if current is not None else _OPTIONAL_TYPES.get(key, str)
        try:
            if kind is bool:
                lowered = value.strip().lower()
                if lowered in ("1", "true", "yes", "on"):
                    return True
                if lowered in ("0", "false", "no", "off"):
                    return False
                raise ValueError(value)
            return kind(value.strip())
        except ValueError:
            raise ConfigError(f"bad value {value!r} for {key} (expected {kind.__name__})") from None

    def load_from_file(self, file_path: str) -> bool:
        """Merge a ``key=value`` or YAML file into the current values."""
        if not os.path.exists(file_path):
            raise ConfigError(f"config file {file_path} does not exist")
        if file_path.endswith((".yaml", ".yml")):
            with open(file_path, "r", encoding="utf-8") as f:
                user_config = yaml.safe_load(f) or {}
            if not isinstance(user_config, dict):
                raise ConfigError(f"{file_path}: expected a mapping at top level")
        else:
            user_config = dict(self._read_key_values(file_path))
        self._merge_config(user_config)
        logger.debug("loaded configuration from %s", file_path)
        return True

    @staticmethod
    def _read_key_values(file_path: str) -> Iterator[Tuple[str, str]]:
        with open(file_path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                if "=" not in text:
                    raise ConfigError(f"{file_path}:{line_number}: expected key=value")
                key, value = text.split("=", 1)
                yield key.strip(), value.strip()

    def _merge_config(self, user_config: Dict[str, Any], prefix: Optional[str] = None):
        """Merge user configuration with defaults"""
        for key, value in user_config.items():
            full = f"{prefix}.{key}" if prefix else str(key)
            if isinstance(value, dict):
                self._merge_config(value, full)
            else:
                self.set(full, value)

    def as_dict(self) -> Dict[str, Any]:
        return {section: dict(values) for section, values in self._config.items()}


__all__ = ["ConfigLoader"]

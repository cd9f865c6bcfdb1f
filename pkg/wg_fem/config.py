# -*- coding: utf-8 -*-
# Copyright 2026 The wg-fem Authors  (see the AUTHORS file)
# SPDX-License-Identifier: GPL-3.0+

import copy
import logging
import os

import yaml
from marshmallow import ValidationError

from .exceptions import ConfigError
from .schemas import ConfigSchema

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "bench": {
        "output_dir": "results",
        "workers": 1,
        "quadrature_order": 5,
        "approach": "II",
        "dump_mesh": False,
    },
    "solver": {
        "method": "auto",
        "tolerance": 1e-12,
        "max_iterations": 20000,
        "jacobi": True,
        "dense_threshold": 3000,
        "max_restarts": 3,
    },
    "kellogg": {
        "base_n": 10,
        "extra_levels": 2,
        "sweep": [2, 3, 4, 5],
    },
    "logging": {
        "level": "INFO",
    },
}


def deep_merge(base, update):
    """Merge `update` into `base` in place, recursing into nested dicts"""
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            deep_merge(base[key], value)
        else:
            base[key] = value
    return base


def _config_files(path):
    if os.path.isdir(path):
        return [
            os.path.join(path, name)
            for name in sorted(os.listdir(path))
            if name.endswith((".yml", ".yaml"))
        ]
    return [path]


def read_config_file(path):
    try:
        with open(path) as stream:
            content = yaml.safe_load(stream)
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from e
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"Configuration {path} must be a mapping")
    return content


def load_config(paths=(), overrides=None):
    """Built-in defaults, then each file (or conf.d directory) in order, then overrides

    Raises:
        ConfigError: Unreadable files or values rejected by ConfigSchema
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    for path in paths:
        for filename in _config_files(path):
            logger.debug(f"Reading configuration {filename}")
            deep_merge(config, read_config_file(filename))
    if overrides:
        deep_merge(config, overrides)
    try:
        return ConfigSchema().load(config)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e.messages}")
        raise ConfigError("Invalid configuration", details=e.messages) from e

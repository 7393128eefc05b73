"""
Run configuration files, train/test splits and run manifests.
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
import yaml

from .. import __version__
from ..errors import ConfigError
from ..models import RunConfig

logger = logging.getLogger(__name__)

# Entropy word for the split stream; cell streams use cell ids >= 1.
SPLIT_STREAM = 0

T = TypeVar("T")


def load_run_config(path: Optional[Union[str, Path]]) -> RunConfig:
    """
    Load a RunConfig from a YAML file. ``None`` gives the defaults.

    Raises:
        ConfigError: If the file is not a YAML mapping or names unknown keys
    """
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Config file {path} is not valid YAML: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a mapping")
    logger.info(f"Loaded run configuration from {path}")
    return RunConfig.from_dict(data)


def split_indices(n_items: int, test_fraction: float, seed: Optional[int]) -> Tuple[List[int], List[int]]:
    """
    Seeded uniform train/test split.

    ``round(test_fraction * n)`` items go to the test split, keeping at least one
    training item when there is any. Both index lists are sorted.
    """
    if not 0 <= test_fraction < 1:
        raise ConfigError(f"test_fraction must be in [0, 1), got {test_fraction}")
    n_test = int(math.floor(test_fraction * n_items + 0.5))
    n_test = min(n_test, max(n_items - 1, 0))
    if n_test == 0:
        return list(range(n_items)), []
    if seed is None:
        raise ConfigError("A seed is required for a random train/test split")
    order = np.random.default_rng([seed, SPLIT_STREAM]).permutation(n_items)
    test = sorted(int(i) for i in order[:n_test])
    test_set = set(test)
    train = [i for i in range(n_items) if i not in test_set]
    return train, test


def apply_split(items: Sequence[T], train: Sequence[int], test: Sequence[int]) -> Tuple[List[T], List[T]]:
    return [items[i] for i in train], [items[i] for i in test]


def build_manifest(
    command: str,
    config: RunConfig,
    files: Dict[str, str],
    output_dir: Union[str, Path],
    **extra: Any,
) -> Dict[str, Any]:
    """
    Manifest describing one run: command, seed, config and its hash, and written files.

    File paths are stored relative to ``output_dir``.
    """
    output_dir = Path(output_dir)
    relative = {}
    for name, path in sorted(files.items()):
        try:
            relative[name] = str(Path(path).relative_to(output_dir))
        except ValueError:
            relative[name] = str(path)
    manifest = {
        "command": command,
        "version": __version__,
        "seed": config.seed,
        "config_hash": config.config_hash(),
        "config": config.to_dict(),
        "files": relative,
    }
    manifest.update(extra)
    return manifest

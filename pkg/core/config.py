import os
import json
import logging
from dataclasses import dataclass, fields, replace

from xdg.BaseDirectory import xdg_config_home

from core.errors import ParameterError

CONFIG_DIR = os.path.join(xdg_config_home, "curvemed")
CONFIG_FILE = os.path.join(CONFIG_DIR, "config.json")

logger = logging.getLogger("curvemed.config")


@dataclass(frozen=True)
class Settings:
    frechet_abs_tol: float = None
    frechet_rel_tol: float = 1e-9
    max_grid_points: int = 10**5
    max_candidates: int = 10**5
    max_subsets: int = 10**4
    scale_factor: float = 1.0
    scale_mode: str = "faithful"
    threads: int = 1
    log_level: str = "WARNING"


def load_config(path=None):
    path = path or CONFIG_FILE
    if not os.path.exists(path):
        return {}
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except json.JSONDecodeError:
        logger.warning(f"Ignoring malformed config file {path}")
        return {}
    return data if isinstance(data, dict) else {}


def save_config(config, path=None):
    path = path or CONFIG_FILE
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(config, f, indent=4)


def load_settings(overrides=None, path=None):
    """Built-in defaults, then the config file, then overrides (None values skipped)."""
    known = {f.name for f in fields(Settings)}
    values = {}
    for key, value in load_config(path).items():
        if key in known:
            values[key] = value
        else:
            logger.warning(f"Unknown config key {key!r} ignored")
    for key, value in (overrides or {}).items():
        if key not in known:
            raise ParameterError(f"Unknown setting {key!r}.")
        if value is not None:
            values[key] = value
    return replace(Settings(), **values)

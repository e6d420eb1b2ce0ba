"""
Command configuration files.

A config file is either TOML with one table per command::

    [detect]
    method = "dcd-tmhc"
    k1 = 1000
    seed = 7

or a JSON run manifest written by a previous command, which holds the
command name and its parameters. Either way the result is a click
``default_map`` keyed by command, so flags given on the command line win.
"""

import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Union

from community_explorer.errors import ConfigError

logger = logging.getLogger(__name__)

COMMANDS = ("compose", "detect", "simulate", "evaluate", "profile", "fractions", "logit", "diagnose")


def _from_manifest(document: Dict[str, Any], path: Path) -> Dict[str, Dict[str, Any]]:
    command = document.get("command")
    params = document.get("params")
    if command not in COMMANDS or not isinstance(params, dict):
        raise ConfigError(
            f"{path}: JSON config must be a run manifest with 'command' and 'params'",
            {"path": str(path)},
        )
    return {command: params}


def load_config(path: Union[str, Path]) -> Dict[str, Dict[str, Any]]:
    """Read a TOML config or JSON manifest into a click default_map.

    Raises:
        ConfigError: Unreadable file, invalid syntax or unknown command tables
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}", {"path": str(path)}) from e

    if path.suffix.lower() == ".json":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON ({e.msg})", {"path": str(path), "line": e.lineno}) from e
        default_map = _from_manifest(document, path)
    else:
        try:
            document = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: invalid TOML ({e})", {"path": str(path)}) from e
        unknown = [key for key in document if key not in COMMANDS]
        bad = [key for key in document if not isinstance(document[key], dict)]
        if unknown or bad:
            raise ConfigError(
                f"{path}: expected command tables {COMMANDS}, found {sorted(set(unknown + bad))}",
                {"path": str(path), "unknown": sorted(set(unknown + bad))},
            )
        default_map = {key: dict(value) for key, value in document.items()}

    # click matches defaults by parameter name
    normalized = {
        command: {key.replace("-", "_"): value for key, value in params.items()}
        for command, params in default_map.items()
    }
    logger.debug(f"Loaded config {path}: {normalized}")
    return normalized

"""
Tests for command configuration files.
"""

from pathlib import Path

import pytest

from community_explorer.config import load_config
from community_explorer.errors import ConfigError


@pytest.mark.unit
def test_toml_tables_become_default_map(temp_dir: Path) -> None:
    """Each TOML table configures one command; dashed keys match parameter names."""
    path = temp_dir / "run.toml"
    path.write_text('[detect]\nmethod = "stm"\nk1 = 1000\nn-sim = 50\n\n[compose]\nr = 250.0\n')
    default_map = load_config(path)
    assert default_map == {
        "detect": {"method": "stm", "k1": 1000, "n_sim": 50},
        "compose": {"r": 250.0},
    }


@pytest.mark.unit
def test_json_manifest_replays_its_command(temp_dir: Path) -> None:
    """A run manifest maps its command to its recorded parameters."""
    path = temp_dir / "out.manifest.json"
    path.write_text('{"command": "detect", "params": {"method": "kmeans", "k": 4}, "n_communities": 4}')
    assert load_config(path) == {"detect": {"method": "kmeans", "k": 4}}


@pytest.mark.unit
@pytest.mark.parametrize(
    "name,content",
    [
        ("unknown.toml", "[cluster]\nk = 3\n"),
        ("scalar.toml", "seed = 3\n"),
        ("broken.toml", "[detect\n"),
        ("broken.json", "{not json"),
        ("plain.json", '{"method": "stm"}'),
        ("wrong_command.json", '{"command": "train", "params": {}}'),
    ],
)
def test_invalid_configs_are_rejected(name: str, content: str, temp_dir: Path) -> None:
    """Unknown tables, bad syntax and non-manifest JSON raise ConfigError."""
    path = temp_dir / name
    path.write_text(content)
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert excinfo.value.to_dict()["error"] == "config_error"


@pytest.mark.unit
def test_missing_config_file(temp_dir: Path) -> None:
    """An unreadable path is a configuration error."""
    with pytest.raises(ConfigError):
        load_config(temp_dir / "absent.toml")

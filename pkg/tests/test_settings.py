"""Tests for the settings layer."""

import json

import pytest
import yaml

from config.settings import DEFAULTS, THREADS_ENV_VAR, SimulationSettings, get_settings, initialize_settings


@pytest.fixture(autouse=True)
def no_thread_override(monkeypatch):
    monkeypatch.delenv(THREADS_ENV_VAR, raising=False)


def test_defaults_without_file(tmp_path):
    settings = SimulationSettings(tmp_path / "absent.yaml")
    assert not settings.load()
    assert settings.get_nested("certification.safety") == 1.25
    assert settings.get_nested("subdivision.disc_sides") == 64
    assert settings.threads == 1


def test_yaml_overrides_are_merged(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("basins:\n  tol: 1.0e-10\nperformance:\n  threads: 3\n", encoding="utf-8")
    settings = SimulationSettings(path)
    assert settings.load()
    assert settings.get_nested("basins.tol") == 1e-10
    assert settings.get_nested("basins.max_iter") == DEFAULTS["basins"]["max_iter"]
    assert settings.threads == 3


def test_non_mapping_root(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        SimulationSettings(path).load()


def test_environment_threads(tmp_path, monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "6")
    settings = SimulationSettings(tmp_path / "absent.yaml")
    settings.load()
    assert settings.threads == 6


def test_non_integer_environment_is_ignored(tmp_path, monkeypatch):
    monkeypatch.setenv(THREADS_ENV_VAR, "many")
    settings = SimulationSettings(tmp_path / "absent.yaml")
    settings.load()
    assert settings.threads == 1


def test_nested_access(tmp_path):
    settings = SimulationSettings(tmp_path / "absent.yaml")
    settings.load()
    settings.set_nested("certification.max_depth", 12)
    settings.set_nested("extra.flag", True)
    assert settings.get_nested("certification.max_depth") == 12
    assert settings.get_nested("extra.flag") is True
    assert settings.get_nested("missing.key", "fallback") == "fallback"
    settings.reset_to_defaults()
    assert settings.get_nested("certification.max_depth") == 120


def test_save_and_reload(tmp_path):
    path = tmp_path / "saved.yaml"
    settings = SimulationSettings(path)
    settings.set_nested("run.seed", 42)
    assert settings.save() == path
    reloaded = SimulationSettings(path)
    reloaded.load()
    assert reloaded.get_nested("run.seed") == 42
    assert yaml.safe_load(path.read_text(encoding="utf-8"))["run"]["seed"] == 42


def test_export_settings(tmp_path):
    settings = SimulationSettings(tmp_path / "absent.yaml")
    settings.load()
    target = tmp_path / "effective.json"
    settings.export_settings(target)
    assert json.loads(target.read_text(encoding="utf-8")) == settings.settings


def test_repository_defaults_match_builtin():
    settings = SimulationSettings()
    settings.load()
    assert settings.settings == DEFAULTS


def test_global_instance(tmp_path):
    path = tmp_path / "global.yaml"
    path.write_text("run:\n  seed: 7\n", encoding="utf-8")
    installed = initialize_settings(path)
    assert get_settings() is installed
    assert get_settings().get_nested("run.seed") == 7

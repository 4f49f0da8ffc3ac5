import pytest

from pastewatch.config import Settings, env_var_for, load_settings
from pastewatch.errors import ConfigError


def test_defaults():
    s = load_settings(environ={})
    assert s == Settings(clone_threshold=0.8, delay_ms=10_000,
                         expiry_ms=30_000, model_path="",
                         decision_threshold=0.5)


def test_config_file_layer(tmp_path):
    cfg = tmp_path / "sentinel.conf"
    cfg.write_text("# comment\n\nclone.threshold = 0.9\n"
                   "sentinel.delayMs=2500\n")
    s = load_settings(config_path=cfg, environ={})
    assert s.clone_threshold == 0.9
    assert s.delay_ms == 2500
    assert s.decision_threshold == 0.5


def test_env_overrides_file(tmp_path):
    cfg = tmp_path / "sentinel.conf"
    cfg.write_text("clone.threshold=0.9\n")
    s = load_settings(config_path=cfg,
                      environ={"SENTINEL_CLONE_THRESHOLD": "0.7"})
    assert s.clone_threshold == 0.7


def test_flags_override_env(tmp_path):
    s = load_settings(environ={"SENTINEL_DECISION_THRESHOLD": "0.6"},
                      overrides={"decision.threshold": 0.75,
                                 "model.path": None})
    assert s.decision_threshold == 0.75
    assert s.model_path == ""  # None override ignored


def test_unknown_file_key_rejected(tmp_path):
    cfg = tmp_path / "sentinel.conf"
    cfg.write_text("clone.treshold=0.9\n")
    with pytest.raises(ConfigError):
        load_settings(config_path=cfg, environ={})


def test_unknown_override_rejected():
    with pytest.raises(ConfigError):
        load_settings(environ={}, overrides={"bogus": 1})


def test_malformed_line_rejected(tmp_path):
    cfg = tmp_path / "sentinel.conf"
    cfg.write_text("clone.threshold 0.9\n")
    with pytest.raises(ConfigError):
        load_settings(config_path=cfg, environ={})


def test_bad_value_type_rejected():
    with pytest.raises(ConfigError):
        load_settings(environ={"SENTINEL_SENTINEL_DELAYMS": "soon"})


def test_env_var_names():
    assert env_var_for("sentinel.delayMs") == "SENTINEL_SENTINEL_DELAYMS"
    assert env_var_for("model.path") == "SENTINEL_MODEL_PATH"

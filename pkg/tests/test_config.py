import importlib
import logging

import pytest

from greennet import config


@pytest.fixture
def reload_config(monkeypatch):
    """Reload greennet.config under a patched environment, then restore it"""
    yield lambda: importlib.reload(config)
    monkeypatch.undo()
    importlib.reload(config)


class TestFloatEnv:
    def test_unset_keeps_default(self, monkeypatch):
        monkeypatch.delenv("GREENNET_TEST_TOL", raising=False)
        assert config._float_env("GREENNET_TEST_TOL", 1e-9) == 1e-9

    def test_blank_keeps_default(self, monkeypatch):
        monkeypatch.setenv("GREENNET_TEST_TOL", "  ")
        assert config._float_env("GREENNET_TEST_TOL", 1e-9) == 1e-9

    @pytest.mark.parametrize("raw, expected", [("1e-7", 1e-7), ("0.5", 0.5), (" 2e-10 ", 2e-10)])
    def test_override(self, monkeypatch, raw, expected):
        monkeypatch.setenv("GREENNET_TEST_TOL", raw)
        assert config._float_env("GREENNET_TEST_TOL", 1e-9) == expected

    def test_malformed_falls_back(self, monkeypatch, caplog):
        monkeypatch.setenv("GREENNET_TEST_TOL", "tight")
        with caplog.at_level(logging.WARNING, logger="greennet.config"):
            assert config._float_env("GREENNET_TEST_TOL", 1e-9) == 1e-9
        assert "Ignoring malformed GREENNET_TEST_TOL='tight'" in caplog.text


class TestSolveTolerance:
    def test_environment_override(self, monkeypatch, reload_config):
        monkeypatch.setenv("GREENNET_TOL", "1e-7")
        assert reload_config().SOLVE_TOL == 1e-7

    def test_malformed_value_keeps_default(self, monkeypatch, reload_config):
        monkeypatch.setenv("GREENNET_TOL", "not-a-number")
        assert reload_config().SOLVE_TOL == 1e-9

"""Tests for configuration module."""

import pytest

from regsubmod import CgConfig, ConfigurationError, SolverConfig
from regsubmod.core import Coverage, DirectedCut
from regsubmod.enums import MarginalMode


def test_config_from_env(monkeypatch):
    """Test creating config from environment variables."""
    monkeypatch.setenv("REGSUBMOD_THREADS", "4")
    monkeypatch.setenv("REGSUBMOD_SEED", "11")
    monkeypatch.setenv("REGSUBMOD_EPS", "0.25")
    monkeypatch.setenv("REGSUBMOD_SHOW_PROGRESS", "yes")
    config = SolverConfig.from_env()
    assert config.threads == 4
    assert config.seed == 11
    assert config.eps == 0.25
    assert config.show_progress is True
    assert config.steps == 200


def test_config_with_overrides(monkeypatch):
    """Test that explicit overrides win over the environment."""
    monkeypatch.setenv("REGSUBMOD_THREADS", "4")
    config = SolverConfig.from_env(threads=2, steps=50, seed=None)
    assert config.threads == 2
    assert config.steps == 50
    assert config.seed == 0


def test_config_invalid_env_value(monkeypatch):
    """Test that a non-numeric environment value raises error."""
    monkeypatch.setenv("REGSUBMOD_STEPS", "many")
    with pytest.raises(ConfigurationError):
        SolverConfig.from_env()


@pytest.mark.parametrize(
    "field, value",
    [("threads", 0), ("seed", -1), ("steps", 0), ("eps", 0.0), ("samples", 0), ("log_level", "LOUD")],
)
def test_config_invalid_values(field, value):
    """Test that invalid values raise error."""
    with pytest.raises(ConfigurationError):
        SolverConfig(**{field: value})


def test_config_defaults(monkeypatch):
    """Test default configuration values."""
    for key in ("THREADS", "SEED", "STEPS", "EPS", "SAMPLES", "ENABLE_LOG", "LOG_LEVEL", "SHOW_PROGRESS"):
        monkeypatch.delenv(f"REGSUBMOD_{key}", raising=False)
    config = SolverConfig.from_env()
    assert config.threads == 1
    assert config.seed == 0
    assert config.eps == 0.5
    assert config.samples == 2000
    assert config.enable_log is False
    assert config.log_level == "WARNING"


def test_log_level_normalized():
    """Test that log levels are case-insensitive."""
    config = SolverConfig(log_level="debug")
    assert config.log_level == "DEBUG"
    assert config.log_level_value == 10


def test_cg_config_times():
    """Test the ordering of switch and final times."""
    assert CgConfig(t_s=0.2, t_f=0.8, steps=40).delta == pytest.approx(0.02)
    with pytest.raises(ConfigurationError):
        CgConfig(t_s=0.5, t_f=0.4)
    with pytest.raises(ConfigurationError):
        CgConfig(t_s=-0.1, t_f=1.0)


def test_cg_config_marginal_mode():
    """Test that gradients are sampled only for large functions without a closed form."""
    cfg = SolverConfig(steps=30, exact_gradient_max_n=3, seed=5)
    dicut = DirectedCut(5, ((0, 1, 1.0),))
    table = Coverage(5, ({0}, {0}, {1}, {1}, set()), (1.0, 1.0)).to_table()
    assert CgConfig.from_solver(cfg, f=dicut).marginal_mode is MarginalMode.EXACT
    run = CgConfig.from_solver(cfg, t_s=0.1, t_f=0.9, f=table)
    assert run.marginal_mode is MarginalMode.SAMPLED
    assert run.steps == 30
    assert run.seed == 5

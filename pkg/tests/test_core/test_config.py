# Tests - Engine Settings
import pytest
import os
import sys

# 添加项目根目录到路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from core.config import (
    DEFAULT_ATTEMPT_BUDGET,
    DEFAULT_LOG_LEVEL,
    ENV_BUDGET,
    ENV_LOG_LEVEL,
    ENV_SEED,
    ENV_WORKERS,
    EngineSettings,
)


@pytest.fixture
def clean_env(monkeypatch):
    """清除相关环境变量"""
    for name in (ENV_SEED, ENV_BUDGET, ENV_LOG_LEVEL, ENV_WORKERS):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


class TestEngineSettings:
    """测试环境变量配置"""

    def test_defaults(self, clean_env):
        settings = EngineSettings.from_env()
        assert settings == EngineSettings()
        assert settings.attempt_budget == DEFAULT_ATTEMPT_BUDGET

    def test_overrides(self, clean_env):
        """测试环境变量覆盖默认值"""
        clean_env.setenv(ENV_SEED, "42")
        clean_env.setenv(ENV_BUDGET, "500")
        clean_env.setenv(ENV_LOG_LEVEL, "debug")
        clean_env.setenv(ENV_WORKERS, "2")
        settings = EngineSettings.from_env()
        assert settings == EngineSettings(default_seed=42, attempt_budget=500, log_level="DEBUG", max_workers=2)

    def test_bad_values_fall_back(self, clean_env):
        """测试非法值回退到默认值"""
        clean_env.setenv(ENV_BUDGET, "lots")
        clean_env.setenv(ENV_WORKERS, "0")
        clean_env.setenv(ENV_LOG_LEVEL, "LOUD")
        settings = EngineSettings.from_env()
        assert settings.attempt_budget == DEFAULT_ATTEMPT_BUDGET
        assert settings.max_workers == EngineSettings().max_workers
        assert settings.log_level == DEFAULT_LOG_LEVEL

    def test_negative_seed(self, clean_env):
        """测试负种子与 --seed 一样被接受"""
        clean_env.setenv(ENV_SEED, "-3")
        assert EngineSettings.from_env().default_seed == -3

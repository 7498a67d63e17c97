"""
运行配置 - 从环境变量读取引擎默认值
"""

import os
import logging
from dataclasses import dataclass
from typing import Optional

logger = logging.getLogger(__name__)

# 默认随机回退预算（块大小 ≤ 12 时足够）
DEFAULT_ATTEMPT_BUDGET = 100_000
DEFAULT_SEED = 0
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_MAX_WORKERS = 4

ENV_SEED = "TRINIL_SEED"
ENV_BUDGET = "TRINIL_BUDGET"
ENV_LOG_LEVEL = "TRINIL_LOG_LEVEL"
ENV_WORKERS = "TRINIL_WORKERS"

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _int_from_env(name: str, default: int, minimum: Optional[int] = None) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"⚠️ 环境变量 {name}={raw!r} 不是整数，使用默认值 {default}")
        return default
    if minimum is not None and value < minimum:
        logger.warning(f"⚠️ 环境变量 {name}={value} 小于 {minimum}，使用默认值 {default}")
        return default
    return value


@dataclass(frozen=True)
class EngineSettings:
    """引擎运行配置

    Attributes:
        default_seed: 随机回退的默认种子
        attempt_budget: GF(2) 随机回退的最大采样次数
        log_level: 日志级别名
        max_workers: 批量分解的并发度
    """

    default_seed: int = DEFAULT_SEED
    attempt_budget: int = DEFAULT_ATTEMPT_BUDGET
    log_level: str = DEFAULT_LOG_LEVEL
    max_workers: int = DEFAULT_MAX_WORKERS

    @classmethod
    def from_env(cls) -> "EngineSettings":
        """从环境变量构造配置

        Returns:
            EngineSettings 实例
        """
        level = os.environ.get(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL).strip().upper()
        if level not in _LEVELS:
            logger.warning(f"⚠️ 未知日志级别 {level!r}，使用 {DEFAULT_LOG_LEVEL}")
            level = DEFAULT_LOG_LEVEL

        return cls(
            default_seed=_int_from_env(ENV_SEED, DEFAULT_SEED),
            attempt_budget=_int_from_env(ENV_BUDGET, DEFAULT_ATTEMPT_BUDGET, 1),
            log_level=level,
            max_workers=_int_from_env(ENV_WORKERS, DEFAULT_MAX_WORKERS, 1),
        )

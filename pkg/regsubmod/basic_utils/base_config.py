"""
通用的基本参数配置模块。
求解器、表格复现和 CLI 都会用到这里的参数。
"""


import logging
import os
from dataclasses import dataclass
from typing import Any, Dict

from ..exceptions import ConfigurationError

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class BaseConfig:
    threads: int = 1
    seed: int = 0
    enable_log: bool = False
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ConfigurationError(f"threads must be at least 1. Got: {self.threads}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be non-negative. Got: {self.seed}")
        self.log_level = str(self.log_level).upper()
        if self.log_level not in _LOG_LEVELS:
            raise ConfigurationError(
                f"log_level must be one of {', '.join(_LOG_LEVELS)}. Got: {self.log_level}"
            )

    @property
    def log_level_value(self) -> int:
        """logging 模块使用的整数级别。"""
        return int(getattr(logging, self.log_level))

    @staticmethod
    def _get_env(key: str, default: Any = None, type_func: Any = str) -> Any:
        """
        从环境中读取指定键（key）；
        如果不存在，返回传入的 default；
        否则把字符串值用 type_func 转换成相应类型（对布尔值有专门判断）。
        """
        val = os.getenv(key)
        if val is None:
            return default
        if type_func is bool:
            return val.lower() in ("true", "1", "yes", "on")
        try:
            return type_func(val)
        except ValueError as e:
            raise ConfigurationError(f"Environment variable {key}={val!r} is invalid: {e}") from e

    @staticmethod
    def _filter_none_values(config: Dict[str, Any]) -> Dict[str, Any]:
        """
        过滤掉字典中值为 None 的键值对。
        """
        return {k: v for k, v in config.items() if v is not None}

"""
用于记录程序日志的模块。
"""

import logging
import os
from datetime import datetime

logger = logging.getLogger(__name__)

HANDLER_NAME = "regsubmod_file_handler"


def setup_file_logger(
    log_dir_name: str = "regsubmod-logs",
    logger_name: str = "regsubmod",
    level: int = logging.INFO,
) -> str:
    """
    创建日志目录并将文件处理程序附加到指定的记录器。
    Args:
        log_dir_name: 日志目录名称（位于当前工作目录下）。
        logger_name: 记录器名称，同时也是日志文件名前缀。
        level: 日志记录级别。

    Returns:
        path：创建的日志文件的路径。
    """
    log_dir = os.path.join(os.getcwd(), log_dir_name)
    os.makedirs(log_dir, exist_ok=True)

    # 日志文件基于当前时间戳命名
    ts = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = os.path.join(log_dir, f"{logger_name}_{ts}.log")

    pkg_logger = logging.getLogger(logger_name)
    pkg_logger.setLevel(level)

    # 删除既往同名 handler，防止旧的 handler 把日志写入新的 log 文件
    to_remove = [h for h in list(pkg_logger.handlers) if getattr(h, "name", "") == HANDLER_NAME]
    for existing_handler in to_remove:
        try:
            existing_handler.close()
        except Exception as e:
            logger.debug(f"关闭旧的日志 handler 失败: {e}")
        pkg_logger.removeHandler(existing_handler)

    fh = logging.FileHandler(log_file)
    fh.setLevel(level)
    fh.setFormatter(logging.Formatter("%(asctime)s %(levelname)s [%(name)s] %(message)s"))
    fh.name = HANDLER_NAME
    pkg_logger.addHandler(fh)

    return log_file

import logging
from pathlib import Path
from typing import Optional, Union

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "subspace_sat"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def resolve_level(level: Union[str, int]) -> int:
    """把级别名（不区分大小写）或数值转换为logging级别"""
    if isinstance(level, int):
        return level
    value = logging.getLevelName(level.strip().upper())
    if not isinstance(value, int):
        raise ValueError(f"未知的日志级别: {level}")
    return value


def setup_logger(
    name: str = LOGGER_NAME,
    level: Union[str, int] = "INFO",
    log_file: Optional[Path] = None
) -> logging.Logger:
    """设置日志记录器

    求解报告写在stdout上，控制台日志因此一律走stderr。

    Args:
        name: 日志记录器名称
        level: 日志级别
        log_file: 可选的日志文件路径

    Returns:
        logging.Logger: 配置好的日志记录器
    """
    logger = logging.getLogger(name)
    logger.setLevel(resolve_level(level))
    logger.propagate = False

    # 重复调用时替换旧的处理器
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    rich_handler = RichHandler(
        console=Console(stderr=True),
        rich_tracebacks=True,
        tracebacks_show_locals=False,
        show_path=False
    )
    rich_handler.setFormatter(logging.Formatter(fmt="%(message)s", datefmt="[%X]"))
    logger.addHandler(rich_handler)

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        logger.addHandler(file_handler)

    return logger


# 全局默认日志记录器，CLI启动时按配置重新设置
logger = setup_logger()

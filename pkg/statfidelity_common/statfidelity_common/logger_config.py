import os
import sys

from loguru import logger

_DEFAULT_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss} - {name} - {level} - {message}"
)
_FILE_FORMAT = (
    "{time:YYYY-MM-DD HH:mm:ss} - {name} - {level} - {file}:{line} - {message}"
)

_configured = False


def setup_logging(level: str = None, log_file: str = None, rotation: str = None) -> None:
    """
    Install the stderr sink and, optionally, a rotating file sink.

    Args:
        level: Minimum level; defaults to LOG_LEVEL from the configuration
        log_file: Path of the file sink; an empty value disables it
        rotation: loguru rotation rule such as "1 MB"
    """
    global _configured
    # Imported here because config logs through this module
    from statfidelity_common.config import get_config

    settings = get_config()
    level = level or settings.get("LOG_LEVEL", "INFO")
    log_file = settings.get("LOG_FILE", "") if log_file is None else log_file
    rotation = rotation or settings.get("LOG_ROTATION", "1 MB")

    logger.remove()
    logger.add(sys.stderr, level=level, format=_DEFAULT_FORMAT)
    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)
        logger.add(log_file, level="DEBUG", format=_FILE_FORMAT,
                   rotation=rotation, encoding="utf-8")
    _configured = True


def get_logger(module_name: str):
    """
    Get logger for specified module

    Args:
        module_name: Module name, typically use __name__

    Returns:
        loguru logger bound to the module name
    """
    if not _configured:
        setup_logging()
    return logger.bind(module=module_name)


__all__ = ["logger", "setup_logging", "get_logger"]

"""
配置模块，用于加载和管理配置信息
Settings come from config.yaml and can be overridden per key by an
environment variable named STATFIDELITY_<KEY>; the environment wins.
"""
import os
from typing import Any, Dict, Optional

import yaml

from statfidelity_common.logger_config import logger

ENV_PREFIX = "STATFIDELITY_"

# 初始化配置变量
config: Optional[Dict[str, Any]] = None


def _convert(raw: str, template: Any) -> Any:
    """Convert an environment string to the type of the YAML value it replaces."""
    if isinstance(template, bool):
        return raw.strip().lower() in ('true', '1', 'yes')
    if isinstance(template, list):
        return [item.strip() for item in raw.split(',') if item.strip()]
    if template is None:
        return raw
    return type(template)(raw)


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """加载配置文件，并从环境变量更新配置"""
    global config

    if config_path is None:
        current_dir = os.path.dirname(os.path.abspath(__file__))
        config_path = os.path.join(current_dir, 'config.yaml')

    try:
        with open(config_path, 'r', encoding='utf-8') as config_file:
            loaded = yaml.safe_load(config_file) or {}
            logger.trace(f"Loaded configuration from {config_path}")
    except Exception as e:
        error_msg = f"Failed to load configuration from {config_path}: {str(e)}"
        logger.error(error_msg)
        raise FileNotFoundError(error_msg)

    for key in loaded.keys():
        env_value = os.environ.get(f"{ENV_PREFIX}{key}")
        if env_value is None:
            continue
        try:
            loaded[key] = _convert(env_value, loaded[key])
            logger.trace(f"Configuration key {key} overridden from environment")
        except ValueError:
            logger.warning(f"Environment variable {ENV_PREFIX}{key} has the wrong type, keeping file value")

    config = loaded
    return config


def get_config() -> Dict[str, Any]:
    """
    获取配置对象，如果配置未加载则先加载配置

    Returns:
        dict: 配置信息字典
    """
    global config
    if config is None:
        config = load_config()
    return config


def reset_config() -> None:
    """Drop the cached configuration so the next get_config() reloads it."""
    global config
    config = None

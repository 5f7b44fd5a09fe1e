from statfidelity_common.config import get_config, load_config
from statfidelity_common.logger_config import logger, setup_logging

__all__ = ["get_config", "load_config", "logger", "setup_logging"]

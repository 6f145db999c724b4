import logging
import sys
from pathlib import Path
from typing import Optional

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

_settings = {
    'level': 'WARNING',
    'format': DEFAULT_FORMAT,
    'file_path': None,
}


def configure_logging(level: str = "WARNING", fmt: str = DEFAULT_FORMAT,
                      file_path: Optional[str] = None):
    """Set defaults for loggers created afterwards and re-level the existing ones"""
    _settings.update({'level': level, 'format': fmt or DEFAULT_FORMAT, 'file_path': file_path})
    for name in list(logging.Logger.manager.loggerDict):
        logger = logging.getLogger(name)
        if getattr(logger, '_tenshull', False):
            logger.setLevel(getattr(logging, level.upper()))


def setup_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """Setup logger with consistent configuration"""
    logger = logging.getLogger(name)

    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, (level or _settings['level']).upper()))
    logger.propagate = False
    logger._tenshull = True

    formatter = logging.Formatter(_settings['format'])

    # Console handler; stdout carries the text report
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler
    if _settings['file_path']:
        log_path = Path(_settings['file_path'])
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger

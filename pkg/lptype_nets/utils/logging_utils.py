#!/usr/bin/env python3
"""
Logging Utilities for LP-type solvers
Centralized logging setup and management
"""

import logging
from typing import Optional

PACKAGE_LOGGER = 'lptype_nets'


class LoggingManager:
    """Manages logging setup for different components."""

    @staticmethod
    def setup_logger(name: str, level: int = logging.INFO,
                     format_string: Optional[str] = None, emoji: str = "📝",
                     label: Optional[str] = None) -> logging.Logger:
        """Set up a logger with consistent formatting.

        Args:
            name: Logger name. Library modules log through children of it.
            level: Threshold for both logger and handler.
            format_string: Overrides the default emoji format.
            emoji: Prefix shown in front of every message.
            label: Component label shown after the emoji (defaults to name).

        Returns:
            logging.Logger: The configured logger.
        """
        logger = logging.getLogger(name)
        logger.setLevel(level)

        # Avoid adding duplicate handlers
        if not logger.handlers:
            handler = logging.StreamHandler()
            handler.setLevel(logging.DEBUG)

            if format_string is None:
                format_string = f'{emoji} {label or name}: %(message)s'

            handler.setFormatter(logging.Formatter(format_string))
            logger.addHandler(handler)
            logger.propagate = False

        return logger

    @staticmethod
    def setup_solver_logging(level: int = logging.INFO):
        """Set up logging for the meta-algorithm and small solvers."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.solvers', level,
                                           emoji='🧮', label='Solver')

    @staticmethod
    def setup_model_logging(level: int = logging.INFO):
        """Set up logging for streaming, coordinator and MPC simulators."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.models', level,
                                           emoji='📡', label='Model')

    @staticmethod
    def setup_generator_logging(level: int = logging.INFO):
        """Set up logging for instance generators."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.generators', level,
                                           emoji='🎲', label='Generator')

    @staticmethod
    def setup_verification_logging(level: int = logging.INFO):
        """Set up logging for oracles and invariant checks."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.verification', level,
                                           emoji='🔎', label='Verify')

    @staticmethod
    def setup_config_logging(level: int = logging.INFO):
        """Set up logging for configuration manager."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.core.config_manager', level,
                                           emoji='⚙️', label='ConfigManager')

    @staticmethod
    def setup_file_manager_logging(level: int = logging.INFO):
        """Set up logging for instance file I/O."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.core.file_manager', level,
                                           emoji='📁', label='FileManager')

    @staticmethod
    def setup_bench_logging(level: int = logging.INFO):
        """Set up logging for the bench runner."""
        return LoggingManager.setup_logger(f'{PACKAGE_LOGGER}.core.bench_runner', level,
                                           emoji='📊', label='Bench')


# Global logging setup function
def setup_all_logging(level: int = logging.INFO):
    """Set up logging for all components."""
    LoggingManager.setup_solver_logging(level)
    LoggingManager.setup_model_logging(level)
    LoggingManager.setup_generator_logging(level)
    LoggingManager.setup_verification_logging(level)
    LoggingManager.setup_config_logging(level)
    LoggingManager.setup_file_manager_logging(level)
    LoggingManager.setup_bench_logging(level)


def set_package_level(level: int):
    """Change the threshold of every configured component logger."""
    root = logging.getLogger(PACKAGE_LOGGER)
    root.setLevel(level)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith(PACKAGE_LOGGER) and isinstance(logger, logging.Logger):
            logger.setLevel(level)

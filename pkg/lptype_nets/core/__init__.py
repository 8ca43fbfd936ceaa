#!/usr/bin/env python3
"""
Core modules for the LP-type package.

This package contains the command-line application:
- Application controller
- Run configuration
- Instance files and trace output
- Acceptance-suite runner
"""

from .app_controller import AppController
from .bench_runner import BenchRunner
from .cli_parser import CLIParser
from .config_manager import ConfigManager, RunConfig
from .file_manager import InstanceFileManager
from .output_manager import OutputManager

__all__ = [
    'AppController',
    'BenchRunner',
    'CLIParser',
    'ConfigManager',
    'RunConfig',
    'InstanceFileManager',
    'OutputManager',
]

#!/usr/bin/env python3
"""
LP-type Nets - epsilon-net and multiplicative-weights solvers for LP-type problems.

This package provides functionality for:
- Exact LP, hard-margin SVM and minimum enclosing ball solving
- Streaming, coordinator and MPC simulations with resource metering
- Two-curve intersection and reduction instance generators
- Brute-force oracles and invariant checks
- A command-line driver with trace output
"""

__version__ = "0.1.0"
__author__ = "Florian Cochard"
__email__ = "florian@weatherwise.fr"

# Import main components for easy access
from .core.app_controller import AppController
from .core.config_manager import ConfigManager, RunConfig
from .core.file_manager import InstanceFileManager
from .core.cli_parser import CLIParser

from .solvers.meta_solver import Mode, run_meta
from .solvers.problems import LpInstance, MebInstance, SvmInstance
from .models.stream_sim import run_streaming
from .models.coord_sim import run_coordinator
from .models.mpc_sim import run_mpc
from .generators.tci import TciInstance, tci_base, tci_recursive

from .utils.logging_utils import LoggingManager

__all__ = [
    'AppController',
    'ConfigManager',
    'RunConfig',
    'InstanceFileManager',
    'CLIParser',
    'Mode',
    'run_meta',
    'LpInstance',
    'MebInstance',
    'SvmInstance',
    'run_streaming',
    'run_coordinator',
    'run_mpc',
    'TciInstance',
    'tci_base',
    'tci_recursive',
    'LoggingManager',
]

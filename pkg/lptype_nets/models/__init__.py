#!/usr/bin/env python3
"""
Execution models: multi-pass streaming, coordinator and MPC simulators.
"""

from .coord_sim import PartitionScheme, partition, run_coordinator
from .mpc_sim import MpcConfig, aggregate_weight, broadcast, run_mpc
from .stream_sim import ElementStream, run_streaming

__all__ = [
    'PartitionScheme',
    'partition',
    'run_coordinator',
    'MpcConfig',
    'aggregate_weight',
    'broadcast',
    'run_mpc',
    'ElementStream',
    'run_streaming',
]

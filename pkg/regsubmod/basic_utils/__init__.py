"""
Basic utilities module for regsubmod.

This module provides plumbing shared by the solver, the table sweeps and the CLI:
- Configuration management
- Opt-in file logging
- Thread pool fan-out
- Instance file reading and writing
"""

from .base_config import BaseConfig
from .basic_logger import setup_file_logger
from .parallel import map_threaded
from .instance_io import dump_instance, instance_from_dict, instance_to_dict, load_instance, loads_instance

__all__ = [
    "BaseConfig",
    "setup_file_logger",
    "map_threaded",
    "load_instance",
    "loads_instance",
    "dump_instance",
    "instance_from_dict",
    "instance_to_dict",
]

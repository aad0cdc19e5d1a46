"""Batch front end driven by JSON run configurations."""
from .config import RunConfig, load_config, parse_config
from .grammar import parse_function
from .runner import run_config

__all__ = ["RunConfig", "load_config", "parse_config", "parse_function", "run_config"]

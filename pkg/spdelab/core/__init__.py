"""Core infrastructure for spdelab."""

from spdelab.core.config import load_config
from spdelab.core.settings import Settings

__all__ = ["load_config", "Settings"]

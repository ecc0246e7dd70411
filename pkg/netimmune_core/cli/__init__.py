"""
Command-line interface for netimmune-core.
"""

from netimmune_core.cli.cli import main

__all__ = ["main"]

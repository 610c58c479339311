"""Module entry point: ``python -m qespectra``."""

from .cli import entry

entry()

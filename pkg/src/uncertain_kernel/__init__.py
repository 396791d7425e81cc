"""Preprocessing for problems whose input is partly unknown."""
__version__ = "0.1.0"

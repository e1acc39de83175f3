"""Mackey functors, simple functors and higher limits for fusion systems on p-groups."""

__version__ = "0.1.0"

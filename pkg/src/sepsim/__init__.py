"""Pure-state simulation of oracle algorithms with per-step separability analysis."""

__version__ = "0.1.0"

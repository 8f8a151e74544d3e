"""Agent-based automated testing of small games."""

__version__ = "0.1.0"

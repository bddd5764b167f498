"""Cost-optimal configuration and reconfiguration for the house problem."""

__version__ = "0.1.0"

"""Capacity bounds for the two-user MIMO interference channel with receiver cooperation."""

__version__ = "0.1.0"

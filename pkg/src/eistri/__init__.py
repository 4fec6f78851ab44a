"""Distributive Mendelsohn triple systems through Eisenstein-integer module theory."""

__version__ = "0.1.0"

"""Entanglement measures and applications for pure four-qubit states."""

__version__ = "0.1.0"

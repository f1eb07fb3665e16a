"""Verification toolkit for designs held by binary quadratic residue codes."""

__version__ = "0.1.0"

"""Casimir and electrostatic forces between eccentric cylinders and related geometries."""

__version__ = "0.1.0"

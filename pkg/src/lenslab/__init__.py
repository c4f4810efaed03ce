"""Numerical experiments on composition operators with lens-map symbols."""

__version__ = "0.1.0"

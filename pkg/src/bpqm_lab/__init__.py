"""Decoders for pure-state classical-quantum channels at desk scale."""

__version__ = "0.1.0"

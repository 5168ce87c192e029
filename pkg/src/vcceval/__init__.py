"""Score-level objective evaluation for voice conversion systems."""

__version__ = "0.1.0"

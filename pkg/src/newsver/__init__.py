"""Evidence-grounded news verification engine."""

__version__ = "0.1.0"

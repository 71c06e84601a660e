"""Compact-classifier distillation stage for the news-verification pipeline."""

__version__ = "0.1.0"

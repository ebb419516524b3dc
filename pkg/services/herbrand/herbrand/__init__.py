"""Herbrand consistency workbench: Skolemization, evaluations and their search."""

from .main import app

__all__ = ["app"]

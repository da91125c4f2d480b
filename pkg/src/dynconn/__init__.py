"""Fully dynamic graph connectivity with sketch-based cutset recovery."""

from .errors import ParameterError, TraceError, UsageError

__all__ = ["ParameterError", "TraceError", "UsageError"]

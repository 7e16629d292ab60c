"""Traced finite-domain constraint propagation."""

from .domain import FiniteDomain
from .explain import Explanation, holds, parse_explanation
from .events import EventLog, get_events, loads, parse_event, serialize, validate_nesting, validate_results
from .kernel import Kernel
from .paths import Path, parse_path, render_path, resolve
from .terms import parse_term, render

__all__ = [
    "EventLog",
    "Explanation",
    "FiniteDomain",
    "Kernel",
    "Path",
    "get_events",
    "holds",
    "loads",
    "parse_event",
    "parse_explanation",
    "parse_path",
    "parse_term",
    "render",
    "render_path",
    "resolve",
    "serialize",
    "validate_nesting",
    "validate_results",
]

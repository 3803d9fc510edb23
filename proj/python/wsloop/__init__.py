"""Termination analysis of monadic WS1S/WS2S rules."""

from pathlib import Path

from ._wsloop import (
    ParseError,
    ResourceExceeded,
    Rule,
    check,
    check_refinement,
    decide,
    dot,
    finite_start,
    parse_rule,
    search,
    simulate,
)


def load_rule(path, logic=None):
    return parse_rule(Path(path).read_text(), logic)


__all__ = [
    "ParseError",
    "ResourceExceeded",
    "Rule",
    "check",
    "check_refinement",
    "decide",
    "dot",
    "finite_start",
    "load_rule",
    "parse_rule",
    "search",
    "simulate",
]

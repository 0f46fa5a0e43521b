"""Python access to the safeplan core.

Formulas use the text syntax of the command-line tool. Planning and voting
results come back as plain dictionaries shaped like the tool's JSON output.
"""

import json

from ._core import (
    AllCandidatesInvalid,
    AlphabetTooLarge,
    Error,
    LtlSyntaxError,
    PddlSyntaxError,
    PddlValidationError,
    UnknownAction,
    UnsupportedRequirement,
    equivalent,
    is_conflicting,
    parse,
    progress,
    similarity,
)
from . import _core

__all__ = [
    "AllCandidatesInvalid",
    "AlphabetTooLarge",
    "Error",
    "LtlSyntaxError",
    "PddlSyntaxError",
    "PddlValidationError",
    "UnknownAction",
    "UnsupportedRequirement",
    "classify",
    "equivalent",
    "is_conflicting",
    "parse",
    "progress",
    "similarity",
    "validate",
    "vote",
]


def classify(domain, problem, constraints=(), max_expansions=100000, optimal=False):
    """Classify a task given as PDDL text; returns the stats dictionary."""
    return json.loads(_core._classify(domain, problem, list(constraints), max_expansions, optimal))


def validate(domain, problem, plan, constraints=()):
    """Replay `plan` (list of action names) against the task."""
    return json.loads(_core._validate(domain, problem, list(plan), list(constraints)))


def vote(groups):
    """Dual-layer vote over a list of candidate lists."""
    return json.loads(_core._vote([list(g) for g in groups]))

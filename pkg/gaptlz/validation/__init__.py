from .core import summarize, validate
from .rules import Rule
from .specific import AtLeast, AtMost, CloseTo, Decreasing, IsFinite

__all__ = [
    "Rule",
    "validate",
    "summarize",
    "AtLeast",
    "AtMost",
    "CloseTo",
    "Decreasing",
    "IsFinite",
]

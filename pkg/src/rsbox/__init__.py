"""Shift-invariant S-boxes induced by local Boolean rules."""
from .boolfun import AnfParseError, BooleanFunction, anf, parse_anf
from .metrics import MetricsRecord, metrics_record
from .sbox import RSBox, induce, inv_set, is_bijection

__all__ = [
    "AnfParseError",
    "BooleanFunction",
    "MetricsRecord",
    "RSBox",
    "anf",
    "induce",
    "inv_set",
    "is_bijection",
    "metrics_record",
    "parse_anf",
]
__version__ = "0.1.0"

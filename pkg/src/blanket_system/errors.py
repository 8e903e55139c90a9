"""
Error vocabulary shared by every module.

All domain failures raise `BlanketError`, a `ValueError` carrying an
`ErrorCode` so callers (the CLI, the bench harness) can react per code.
"""

from enum import Enum


class ErrorCode(str, Enum):
    EMPTY_SUBSET = "EMPTY_SUBSET"
    ALREADY_CENTERED = "ALREADY_CENTERED"
    NOT_CENTERED = "NOT_CENTERED"
    DIMENSION_MISMATCH = "DIMENSION_MISMATCH"
    BAD_DATA = "BAD_DATA"
    BAD_KERNEL = "BAD_KERNEL"
    BAD_TARGET = "BAD_TARGET"
    BAD_CONDITIONING = "BAD_CONDITIONING"
    BAD_MEASURE = "BAD_MEASURE"
    BAD_BETA = "BAD_BETA"
    BAD_STOP = "BAD_STOP"
    BAD_ALPHA = "BAD_ALPHA"
    TOO_FEW_SAMPLES = "TOO_FEW_SAMPLES"
    SINGULAR_CONDITIONING = "SINGULAR_CONDITIONING"
    BAD_EXPERIMENT = "BAD_EXPERIMENT"
    BAD_CONFIG = "BAD_CONFIG"
    EMPTY_TRUTH = "EMPTY_TRUTH"
    BAD_ORDER = "BAD_ORDER"
    BAD_K = "BAD_K"
    UNDEFINED_SCORE = "UNDEFINED_SCORE"
    TOO_FEW_TRIALS = "TOO_FEW_TRIALS"
    PARSE_ERROR = "PARSE_ERROR"
    UNKNOWN_TARGET = "UNKNOWN_TARGET"
    NAME_MISMATCH = "NAME_MISMATCH"


class BlanketError(ValueError):
    def __init__(self, code: ErrorCode, message: str):
        super().__init__(f"[{code.value}] {message}")
        self.code = code
        self.message = message

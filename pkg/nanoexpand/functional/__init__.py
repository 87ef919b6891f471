"""
Functional Core Module

Result monad, domain errors and logging setup.
"""

from .result_monad import (
    Result,
    Success,
    Failure,
    from_callable,
    result_wrapper,
)
from .errors import (
    NanoexpandError,
    ValidationError,
    ParseError,
    NonFiniteState,
    InvalidBand,
    TooShort,
    DegenerateSpectrum,
    NoConvergence,
    GridMismatch,
    BadWindow,
    NoPeak,
    IoError,
)
from .log_config import setup_logging, resolve_level

__all__ = [
    "Result",
    "Success",
    "Failure",
    "from_callable",
    "result_wrapper",
    "NanoexpandError",
    "ValidationError",
    "ParseError",
    "NonFiniteState",
    "InvalidBand",
    "TooShort",
    "DegenerateSpectrum",
    "NoConvergence",
    "GridMismatch",
    "BadWindow",
    "NoPeak",
    "IoError",
    "setup_logging",
    "resolve_level",
]

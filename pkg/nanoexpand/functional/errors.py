#!/usr/bin/env python3

"""
Domain Errors

Typed exceptions raised by the numerical kernels. The orchestration layer
turns them into ``Failure`` values via ``from_callable``.
"""

from typing import Any, Optional


class NanoexpandError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NanoexpandError):
    """A physical or configuration value violates an invariant."""

    def __init__(self, invariant: str, key: Optional[str] = None, value: Any = None):
        self.invariant = invariant
        self.key = key
        self.value = value
        where = f"{key}: " if key else ""
        got = f" (got {value!r})" if value is not None else ""
        super().__init__(f"{where}{invariant}{got}")


class ParseError(NanoexpandError):
    """A configuration file could not be read."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        location = []
        if line is not None:
            location.append(f"line {line}")
        if key is not None:
            location.append(f"key '{key}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class NonFiniteState(NanoexpandError):
    """Position or velocity left the finite range during integration."""

    def __init__(self, time: float, trajectory_index: Optional[int] = None):
        self.time = time
        self.trajectory_index = trajectory_index
        which = f" in trajectory {trajectory_index}" if trajectory_index is not None else ""
        super().__init__(f"non-finite state at t = {time:.6e} s{which}")

    def with_index(self, trajectory_index: int) -> 'NonFiniteState':
        return NonFiniteState(self.time, trajectory_index)


class InvalidBand(NanoexpandError):
    """Band-pass edges fall outside (0, Nyquist)."""


class TooShort(NanoexpandError):
    """Input series has too few samples for the requested operation."""


class DegenerateSpectrum(NanoexpandError):
    """Spectrum has no resolvable resonance above its noise floor."""


class NoConvergence(NanoexpandError):
    """Least-squares fit stopped before meeting its tolerance."""

    def __init__(self, message: str, best_fit: Any = None):
        self.best_fit = best_fit
        super().__init__(message)


class GridMismatch(NanoexpandError):
    """Trajectories do not share a common sample grid."""


class BadWindow(NanoexpandError):
    """Fit window is empty, outside the data, or contains non-positive values."""


class NoPeak(NanoexpandError):
    """Smoothed curve has no qualifying local maximum."""


class IoError(NanoexpandError):
    """Reading or writing an output artifact failed."""

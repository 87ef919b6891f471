"""
Modulation Module

The pulse train S(t) that drives the expansion.
"""

from .schedule import (
    ModulationSchedule,
    pulse_timings,
    schedule_value,
    schedule_values,
    modulation_frequency,
    transition_times,
    describe_protocol,
)

__all__ = [
    "ModulationSchedule",
    "pulse_timings",
    "schedule_value",
    "schedule_values",
    "modulation_frequency",
    "transition_times",
    "describe_protocol",
]

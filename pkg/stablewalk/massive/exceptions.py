"""Exceptions raised by stablewalk.massive.

Parameter problems subclass `ParameterError`, problems with the size or the
numerical conditioning of a computation subclass `ResourceError`.
The command line maps the two families to different exit codes.
"""
from typing import Optional


class ParameterError(ValueError):
    """A parameter is outside its documented domain"""


class NotTransient(ParameterError):
    """The requested walk is recurrent: its Green function is infinite"""


class ResourceError(ValueError):
    """A computation exceeds a configured size limit"""


class ConditioningError(ResourceError):
    """A linear system could not be solved to the requested accuracy"""

    def __init__(self, message: str, condition_number: Optional[float] = None):
        super().__init__(message)
        self.condition_number = condition_number


class EquilibriumError(ConditioningError):
    """The computed equilibrium measure has negative weights"""

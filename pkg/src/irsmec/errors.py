"""Typed errors raised by the simulator.

Invalid physics inputs raise :class:`DomainError` rather than letting
infinities or NaNs leak into results.
"""


class IrsMecError(Exception):
    """Base class for all simulator errors."""


class DomainError(IrsMecError, ValueError):
    """A physical quantity is outside its valid domain (e.g. distance <= 0)."""


class SaturatedProcessorError(DomainError):
    """A processor has no free CPU frequency left (occupied >= total)."""


class InfeasibleError(IrsMecError, ValueError):
    """A requested target cannot be met by any parameter choice."""


class ConfigError(IrsMecError, ValueError):
    """Scenario text failed to parse or validate.

    Carries the offending key and 1-based line number when known
    (line 0 means "not locatable", e.g. a missing-section default).
    """

    def __init__(self, message: str, key: str = "", line: int = 0):
        self.key = key
        self.line = line
        if key:
            message = f"{message} (key '{key}', line {line})"
        super().__init__(message)

"""
Exception hierarchy for netimmune-core.
"""

from typing import Optional


class NetImmuneError(Exception):
    """Base class for all library errors."""


class GraphParseError(NetImmuneError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphValidationError(NetImmuneError, ValueError):
    """Graph, node subset or generator parameters violate an invariant."""


class ConvergenceError(NetImmuneError, RuntimeError):
    """Eigen solver stopped at its iteration cap without converging."""

    def __init__(self, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(last residual {residual:.3e})"
        )


class ConfigError(NetImmuneError, ValueError):
    """Invalid experiment, GA or generator configuration."""


class FrontSchemaError(NetImmuneError, ValueError):
    """Front file does not follow the expected schema."""


class ValidationMismatchError(NetImmuneError, RuntimeError):
    """An emitted solution does not reproduce its recorded objectives."""

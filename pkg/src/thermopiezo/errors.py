"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ThermopiezoError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(ThermopiezoError, ValueError):
    """Input array has the wrong shape or contains non-finite values."""


class SymmetryViolationError(ThermopiezoError, ValueError):
    """A tensor breaks an index symmetry it is required to have."""

    def __init__(self, message: str, worst_index=None, violation: float | None = None):
        super().__init__(message)
        self.worst_index = worst_index
        self.violation = violation


class DegenerateCoefficientError(ThermopiezoError, ZeroDivisionError):
    """A coefficient that appears in a denominator vanishes (e.g. beta = 0)."""


class MaterialFileError(ThermopiezoError, ValueError):
    """Material or state file could not be parsed or is incomplete."""


class MissingFieldError(MaterialFileError):
    def __init__(self, field: str, source: str = ""):
        where = f" in {source}" if source else ""
        super().__init__(f"missing required field {field!r}{where}")
        self.field = field


class UnknownFieldError(MaterialFileError):
    def __init__(self, field: str, source: str = ""):
        where = f" in {source}" if source else ""
        super().__init__(f"unknown field {field!r}{where}")
        self.field = field


class NonQuadraticError(ThermopiezoError, ValueError):
    """Evaluator handed to quadratic-form assembly is not a pure quadratic."""


class ConfigurationError(ThermopiezoError, ValueError):
    """Simulation configuration is invalid or leads to a singular system."""


class InadmissibleMaterialError(ConfigurationError):
    """Material fails the hypotheses required by the simulator."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class SimulationError(ThermopiezoError, RuntimeError):
    """Time stepping failed (solver breakdown or non-finite state)."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step

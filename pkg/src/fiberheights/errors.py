"""Exception types shared across the package."""

from __future__ import annotations


class FiberHeightsError(Exception):
    """Base class for every error raised by this package."""


class InputError(FiberHeightsError, ValueError):
    """Invalid input data: bad constructor arguments, malformed files."""


class ZeroDenominatorError(InputError):
    """A rational function was built with a zero denominator."""


class PoleError(FiberHeightsError, ArithmeticError):
    """Evaluation at a pole. Carries the multiplicity of the pole."""

    def __init__(self, message: str, multiplicity: int = 1):
        super().__init__(message)
        self.multiplicity = multiplicity


class SingularCurveError(InputError):
    """The discriminant -16(4a^3 + 27b^2) vanishes."""


class PointNotOnCurveError(InputError):
    """An affine point does not satisfy its curve equation exactly."""


class FamilyFileError(InputError):
    """A family description failed to parse or validate."""


class IsotrivialFamilyError(InputError):
    """The operation requires a family with nonconstant j-invariant."""


class TorsionSectionError(InputError):
    """The operation requires a section of nonzero canonical height."""


class NonpositiveDegreeError(InputError):
    """The bundle degree must be positive; a torsion or zero-height
    section slipped through an upstream guard."""


class FactorizationLimitError(InputError):
    """Coefficients too large for the desk-scale rational-root scan."""


class ComputationError(FiberHeightsError):
    """A computation could not certify its result."""


class BudgetExceededError(ComputationError):
    """Geometric decay was not observed within the doubling budget.
    Carries the partial trace for diagnosis."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class StabilizationError(ComputationError):
    """The exact function-field limit was not confirmed within the
    doubling budget. Carries the exact partial sequence."""

    def __init__(self, message: str, terms=None):
        super().__init__(message)
        self.terms = terms


class BadReductionError(ComputationError):
    """The fiber at this parameter is singular or hits a pole of the
    coefficients or of the section."""

    def __init__(self, message: str, t0=None, cause: str = ""):
        super().__init__(message)
        self.t0 = t0
        self.cause = cause


class IntermediatePoleError(ComputationError):
    """The parameter collides with a pole of a doubled section
    x-coordinate, so the section-route sequence is not defined there."""

    def __init__(self, message: str, t0=None, m: int | None = None):
        super().__init__(message)
        self.t0 = t0
        self.m = m

"""Exception hierarchy shared by all modules."""


class SobolevLabError(Exception):
    """Base class for every error raised by this package."""


class InvalidSpecError(SobolevLabError, ValueError):
    """A potential specification string or its parameters are invalid."""


class InvalidInputError(SobolevLabError, ValueError):
    """An argument is outside the documented domain of an operation."""


class SingularityError(SobolevLabError, ValueError):
    """V'' was requested at a marked singular point."""

    def __init__(self, point: float):
        super().__init__(f"V'' is singular at x = {point!r}")
        self.point = point


class InsufficientDataError(SobolevLabError, ValueError):
    pass


class NonNormalizableError(SobolevLabError, ValueError):
    """e^{-V} does not decay on the requested domain."""


class MixedMeasureError(SobolevLabError, ValueError):
    """Arithmetic between grid functions bound to different measures."""


class DegenerateInputError(SobolevLabError, ValueError):
    pass


class NumericalOverflowError(SobolevLabError, ArithmeticError):
    def __init__(self, message: str, norm: float = float("nan")):
        super().__init__(f"{message} (iterate norm {norm!r})")
        self.norm = norm


class DiscretizationError(SobolevLabError, RuntimeError):
    """The discrete operator violates a structural property (e.g. constants not in the kernel)."""


class ReferenceConstantUnavailable(SobolevLabError, ValueError):
    """No closed form or curvature bound is available for C_p of the reference measure."""

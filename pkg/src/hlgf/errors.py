"""Exception hierarchy shared by the numerical modules."""


class HLGFError(Exception):
    """Base class for all errors raised by :mod:`hlgf`."""


class UnsupportedOrderError(HLGFError, ValueError):
    pass


class SingularityError(HLGFError, ZeroDivisionError):
    pass


class RangeError(HLGFError, OverflowError):
    """Unscaled value would overflow; use the exponentially scaled variant."""


class IntegrandError(HLGFError, FloatingPointError):
    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ConvergenceError(HLGFError, RuntimeError):
    """Quadrature budget exhausted; carries the best estimate so far."""

    def __init__(self, message, value=None, err_estimate=None, evals=0):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate
        self.evals = evals


class DivergenceError(HLGFError, ArithmeticError):
    pass


class WrongRegimeError(HLGFError, ValueError):
    pass


class ScaledRetryError(HLGFError, OverflowError):
    """Unscaled contour integrand overflowed; retry with ``scaled=True``."""


class ConditioningError(HLGFError, ArithmeticError):
    pass


class BudgetError(HLGFError, MemoryError):
    pass


class NotSupportedError(HLGFError, NotImplementedError):
    pass

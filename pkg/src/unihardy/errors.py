"""Exception hierarchy shared by all modules."""


class HardyError(Exception):
    """Base class for every error raised by :mod:`unihardy`."""


# group_model
class EmptyWeights(HardyError, ValueError):
    pass


class WeightBelowOne(HardyError, ValueError):
    pass


class NonpositiveLambda(HardyError, ValueError):
    pass


class IncompatibleNormKind(HardyError, ValueError):
    pass


class DivergentMoment(HardyError, ValueError):
    pass


# radial_calc
class EvalOutsideDomain(HardyError, ValueError):
    pass


class BadDelta(HardyError, ValueError):
    pass


# quadrature
class NonFiniteSample(HardyError, ArithmeticError):
    """An integrand returned NaN or inf at a quadrature node."""

    def __init__(self, abscissa, value=None):
        self.abscissa = abscissa
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at r={abscissa!r}")


class UndefinedAtOrigin(UserWarning):
    """I_p evaluated at (0, 0) with p < 2; the convention value 0 was used."""


# functionals
class Inadmissible(HardyError, ValueError):
    """Parameters or test function fall outside a theorem's hypotheses."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(str(reason))


class ConstraintViolation(Inadmissible):
    pass


class NoAdmissibleDelta(Inadmissible):
    pass


class WindowViolation(Inadmissible):
    pass


# sharpness
class ZeroDenominator(HardyError, ZeroDivisionError):
    pass


# cli
class ConfigError(HardyError, ValueError):
    pass

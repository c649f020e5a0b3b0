"""Exception hierarchy shared by all modules."""


class ValdistError(Exception):
    """Base class for every error raised by this package."""


class InputError(ValdistError, ValueError):
    """Malformed text specification or configuration."""


class DegenerateInput(ValdistError, ValueError):
    pass


class ExactModeRequired(ValdistError, ValueError):
    pass


class RootOnBoundary(ValdistError, ValueError):
    pass


class RootCountMismatch(ValdistError, ArithmeticError):
    """Located roots disagree with the argument-principle count."""


class NoConvergence(ValdistError, ArithmeticError):
    pass


class AtomOnBoundary(ValdistError, ValueError):
    pass


class IndeterminatePoint(ValdistError, ValueError):
    pass


class BoundaryHitsDivisor(ValdistError, ValueError):
    pass


class OriginOnDivisor(ValdistError, ValueError):
    pass


class AttachOnBoundary(ValdistError, ValueError):
    pass


class EmptySample(ValdistError, ValueError):
    pass


class DegenerateNormalizer(ValdistError, ValueError):
    pass


class InsufficientSamples(ValdistError, ValueError):
    pass


class BasePointOnDivisor(ValdistError, ValueError):
    pass


class NormalizerNotDiverging(ValdistError, ValueError):
    pass


class DegreesBounded(NormalizerNotDiverging):
    """Degrees along the sequence do not grow."""


class ConstantMap(ValdistError, ValueError):
    pass


class NotCoprime(ValdistError, ValueError):
    pass


class OriginOnBoundaryDivisor(ValdistError, ValueError):
    pass


class RamifiedAtOrigin(ValdistError, ValueError):
    pass


class IdentityViolation(ValdistError, AssertionError):
    pass

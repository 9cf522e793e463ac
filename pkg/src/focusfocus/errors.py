"""Exception hierarchy. Every error raised by the library derives from FocusFocusError."""


class FocusFocusError(ValueError):
    pass


class InvalidParams(FocusFocusError):
    pass


class DimensionMismatch(FocusFocusError):
    pass


class FiberOutOfRange(FocusFocusError):
    pass


class SingularFiber(FocusFocusError):
    pass


class DivisionAtSingularBranch(FocusFocusError):
    pass


class NotInModel(FocusFocusError):
    pass


class FiberMismatch(FocusFocusError):
    pass


class SingularFiberInput(FocusFocusError):
    pass


class UndefinedAtDoublePoint(FocusFocusError):
    pass


class NoInverseAtSingularPoint(FocusFocusError):
    pass


class ZeroInput(FocusFocusError):
    pass


class SingularPointInput(FocusFocusError):
    pass


class SingularMatrix(FocusFocusError):
    pass


class NotOnGraph(FocusFocusError):
    pass


class OutsideChartDomain(FocusFocusError):
    pass


class NotInOverlap(FocusFocusError):
    pass


class ZeroThirdCoordinate(FocusFocusError):
    pass


class UnknownCheckId(FocusFocusError):
    pass


class EvaluationFailed(FocusFocusError):
    pass


class ConfigError(FocusFocusError):
    pass

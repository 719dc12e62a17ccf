"""Exception types shared across the package."""


class InfoFlowError(Exception):
    """Base class for all errors raised by infoflow."""


class DimensionError(InfoFlowError, ValueError):
    pass


class DomainError(InfoFlowError, ValueError):
    """A point fell outside [0, 1) or a map was evaluated off its domain."""


class EmptySliceError(InfoFlowError, ValueError):
    """Disintegration was requested at a conditioning value with zero mass."""


class UndefinedDerivativeError(InfoFlowError, ValueError):
    pass


class ConsistencyError(InfoFlowError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""


class CapacityError(InfoFlowError, MemoryError):
    """A composite alphabet would exceed the configured dense-tensor budget."""


class UsageError(InfoFlowError, ValueError):
    pass

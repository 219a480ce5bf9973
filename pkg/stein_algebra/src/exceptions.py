class SteinAlgebraError(Exception):
    """
    Base class of every error raised by the engine.
    """


class ConfigurationError(SteinAlgebraError):
    pass


class ShapeError(SteinAlgebraError):
    """
    An operator does not have the shape an operation requires.
    """


class NotAssumptionOne(ShapeError):
    pass


class DegenerateOperator(ShapeError):
    pass


class InvalidParameter(SteinAlgebraError, ValueError):
    pass


class UnsupportedExpression(SteinAlgebraError):
    """
    No construction rule (or moment/Mellin rule) covers the given expression.

    :param message: human-readable reason
    :param subtree: the distribution expression that blocked the construction, if known
    """

    def __init__(self, message: str, subtree=None):
        super().__init__(message)
        self.subtree = subtree


class MomentUnavailable(SteinAlgebraError):

    def __init__(self, index: int, message: str = None):
        super().__init__(message or f"moment of order {index} does not exist")
        self.index = index


class RecurrenceBreakdown(SteinAlgebraError):

    def __init__(self, k: int):
        super().__init__(f"leading recurrence coefficient vanishes at k = {k}")
        self.k = k


class RefusedTransform(SteinAlgebraError):
    pass


class ExpressionSyntaxError(SteinAlgebraError):

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position

"""Exception types. Input problems subclass ``ValueError``."""


class GsSelectError(Exception):
    pass


class InvalidInstance(GsSelectError, ValueError):
    """Instance data violates a site or threshold invariant.

    ``path`` names the offending field when the data came from a file
    (e.g. ``sites[2].cost``).
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class EmptyCatalog(InvalidInstance):
    pass


class NonPositiveCost(InvalidInstance):
    pass


class ProbabilityOutOfRange(InvalidInstance):
    pass


class ThresholdOutOfRange(InvalidInstance):
    pass


class LengthMismatch(GsSelectError, ValueError):
    pass


class NonPositiveEpsilon(GsSelectError, ValueError):
    pass


class InvalidConfig(GsSelectError, ValueError):
    pass


class EmptyRows(GsSelectError, ValueError):
    pass


class Infeasible(GsSelectError):
    """Even selecting every site leaves the network outage above the threshold."""

    def __init__(self, product, threshold):
        self.product = product
        self.threshold = threshold
        super().__init__(
            f"infeasible: product of all outage probabilities {product:.6g} "
            f"exceeds threshold {threshold:.6g}"
        )


class TooLargeForExhaustive(GsSelectError):
    pass


class NoQualifyingColumn(GsSelectError):
    """No DP column reaches the required margin. Indicates a bug, not bad input."""


class SolverTimeout(GsSelectError):
    pass

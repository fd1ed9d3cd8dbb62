"""Exception types shared across the library."""


class IndicatorLabError(ValueError):
    """Base class for all validation and precondition failures."""


class MeasureError(IndicatorLabError):
    """Malformed or inadmissible angular measure."""


class MomentConditionError(IndicatorLabError):
    """Integer order requires the measure's matching trigonometric moment to vanish."""

    def __init__(self, rho: float, moment: complex):
        self.rho = rho
        self.moment = moment
        super().__init__(
            f"order {rho:g} is an integer but the order-{rho:g} moment of the "
            f"measure is {moment:.6e} (|moment| = {abs(moment):.3e} > 1e-9); "
            "no periodic indicator exists for this measure"
        )


class PreconditionError(IndicatorLabError):
    """An operation was called outside its domain of validity."""


class CoverConstructionError(IndicatorLabError):
    """Sparse-interval cover of an unbalanced maximizer set could not be built.

    This signals disagreement between the two balancedness tests and is a bug
    sentinel, not a user error.
    """

"""Exception types shared across the toolkit."""


class GermdynError(Exception):
    """Base class for all domain errors raised by this package."""


class CapMismatchError(GermdynError):
    """Two series with different degree caps were combined."""


class SeriesDomainError(GermdynError):
    """A series operation was called outside its domain of validity."""


class SpectrumError(GermdynError):
    """A germ's linear part is not semi-indifferent."""


class NonIsolatedFixedPointError(GermdynError):
    """The restriction to the center direction is the identity up to the
    degree cap, so the origin is not an isolated fixed point."""


class BackwardStepError(GermdynError):
    """Newton iteration for a backward step failed to converge."""

    def __init__(self, step_index, message=None):
        self.step_index = step_index
        super().__init__(message or f"backward step failed at index {step_index}")


class SmallDivisorError(GermdynError):
    """A coordinate change would divide by a near-resonant quantity.

    Carries the offending order, the divisor magnitude, and whatever
    diagnostics the caller computed before aborting.
    """

    def __init__(self, order, divisor_abs, message=None, diagnostics=None):
        self.order = order
        self.divisor_abs = divisor_abs
        self.diagnostics = diagnostics
        super().__init__(
            message
            or f"small divisor at order {order}: |divisor| = {divisor_abs:.3e}"
        )


class ConvergentOverflowError(GermdynError):
    """Integer growth of continued-fraction data exceeded the checked bit cap."""

    def __init__(self, last_safe_index, bit_cap, message=None):
        self.last_safe_index = last_safe_index
        self.bit_cap = bit_cap
        super().__init__(
            message
            or f"convergent growth exceeds {bit_cap} bits; "
            f"last safe index is {last_safe_index}"
        )


class TruncationBudgetError(GermdynError):
    """An adaptively truncated sum or product failed to settle within budget."""


class DomainTooLargeError(GermdynError):
    """A sampled domain violates the technical smallness condition required
    by an iteration scheme."""


class DegenerateGridError(GermdynError):
    """A grid computation cannot proceed (seed cell missing or escaped)."""

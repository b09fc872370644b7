"""Exception hierarchy shared by every module of the package."""


class SecondSheafError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(SecondSheafError, ValueError):
    """Objects that do not belong together (mismatched rings, non-submodules, bad tables)."""


class CapacityError(SecondSheafError):
    """A guard on enumeration size was exceeded."""

    def __init__(self, what, size, bound):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what}: size {size} exceeds guard {bound}")


class PreconditionError(SecondSheafError, ValueError):
    """A construction was asked for outside the hypotheses it needs."""


class TheoremViolation(SecondSheafError, AssertionError):
    """Two routes that must agree did not; always an implementation bug."""

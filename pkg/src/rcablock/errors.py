"""Exception hierarchy.  The CLI maps these onto exit codes."""


class RCAError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RCAError, ValueError):
    pass


class FormatError(InputError):
    pass


class AlphabetMismatch(InputError):
    pass


class InsufficientSupport(InputError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__(f"pattern does not cover cells {list(self.missing)}")


class NotReversible(InputError):
    """The rule is not injective on bi-infinite configurations."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


NotInjective = NotReversible


class NotAdditive(InputError):
    pass


class PreconditionFailed(InputError):
    pass


class ResourceError(RCAError):
    pass


class TooLarge(ResourceError):
    def __init__(self, what, required, cap):
        self.required = required
        self.cap = cap
        super().__init__(f"{what}: needs {required} evaluations/entries, cap is {cap}")


class RadiusCapExceeded(ResourceError):
    def __init__(self, max_radius):
        self.max_radius = max_radius
        super().__init__(f"rule is injective but no inverse found with radius <= {max_radius}")


class VerificationFailed(RCAError):
    """A computed object violates a proven bound or a construction's contract."""

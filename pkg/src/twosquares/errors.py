"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: ValidationError -> 2,
ResourceGuardError -> 3, InternalError -> 4.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition (bad modulus, parity, range...)."""


class ResourceGuardError(RuntimeError):
    """Requested computation exceeds a feasibility guard.

    Carries a human-readable cost estimate so the caller can decide
    whether to raise the guard explicitly.
    """

    def __init__(self, message: str, cost_estimate: str = ""):
        super().__init__(message)
        self.cost_estimate = cost_estimate


class InternalError(AssertionError):
    """A structural invariant the code maintains itself was broken."""

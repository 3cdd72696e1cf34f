"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (shapes, dimensions, field mismatch)."""


class RefusalError(RuntimeError):
    """A computation was refused because a precondition failed.

    ``diagnostic`` carries a machine-readable description of the failure.
    """

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}

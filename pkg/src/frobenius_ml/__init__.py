"""Constructive F-set machinery for modules with a Frobenius endomorphism."""

from .errors import InputError, RefusalError

__version__ = "0.1.0"
__all__ = ["InputError", "RefusalError", "__version__"]

"""Shared exception types."""


class InputError(ValueError):
    """Malformed or incompatible input data (bad file, wrong rank, unknown point)."""


class ConstructionError(RuntimeError):
    """A construction postcondition failed; carries diagnostics in args."""

"""Error types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2,
DecompositionUnsupported -> 3, CapExceeded -> 4.
"""


class DepthlabError(Exception):
    pass


class ValidationError(DepthlabError):
    """Malformed or inconsistent input (bad JSON, broken axioms, bad flags)."""


class DecompositionUnsupported(DepthlabError):
    """The module is outside the supported decomposition class.

    Raised instead of guessing: the caller may fall back to a coarser
    bound (Burnside chain) or report the quantity as unknown.
    """


class CapExceeded(DepthlabError):
    """A configured resource cap (group order, tensor degree, ...) was hit."""

"""Exception types shared across the package.

The CLI maps these onto its exit-code scheme: input problems exit 2,
numerical aborts exit 3, insufficient data for a metric exits 4.
"""


class IdeofactorError(Exception):
    """Base class for all package errors."""


class InputError(IdeofactorError, ValueError):
    """Invalid caller-supplied data: bad shapes, negative weights, unknown ids."""


class InputFormatError(InputError):
    """Malformed input file; carries the offending path and line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class NumericalAbort(IdeofactorError, ArithmeticError):
    """NaN/Inf appeared inside an iterative solve; carries the iteration index."""

    def __init__(self, iteration, detail):
        super().__init__(f"numerical abort at iteration {iteration}: {detail}")
        self.iteration = iteration


class InsufficientOverlapError(IdeofactorError, ValueError):
    """Two score series share too few ids to compare."""


class DegenerateSeriesError(IdeofactorError, ValueError):
    """A score series has zero variance over the compared ids."""


class UnplaceableError(IdeofactorError, ValueError):
    """An entity has no scored engagement to derive a position from."""

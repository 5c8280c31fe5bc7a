"""Exception types raised across the package."""


class HyperfitError(Exception):
    """Base class for all package errors."""


class DomainError(HyperfitError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class DegenerateFitError(HyperfitError):
    """The data carries no usable deformation signal, or the fit collapsed
    the shear term onto its lower bound."""


class ParseError(HyperfitError):
    """Malformed input file.

    ``row`` is the 1-based line number in the source file (``None`` when the
    problem is not tied to a line) and ``column`` the offending column name.
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.message = message


class NotEquilibratedError(HyperfitError):
    """No plateau was found in a drying-mass series."""


class ExtrapolationError(HyperfitError, ValueError):
    """Query lies outside the sampled range and extrapolation was not requested."""

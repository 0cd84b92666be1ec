"""Exception types shared across the toolkit."""


class DbTopoError(Exception):
    """Base class for all toolkit errors."""


class InvalidGeometryError(DbTopoError):
    """Synthetic geometry violates its constraints (overlap, out of domain)."""


class ParseError(DbTopoError):
    """Malformed input file; message carries the offending row when known."""


class InvalidParameterError(DbTopoError):
    """A parameter is outside its documented range."""


class InsufficientDataError(DbTopoError):
    """Not enough points in a class to carry out the requested computation."""


class InfeasibleScenarioError(DbTopoError):
    """Bound-scenario parameters violate the feasibility conditions."""


class InvalidFiltrationError(DbTopoError):
    """A filtration violates face closure or monotonicity."""

"""Exception hierarchy shared by all fracstar modules."""

from __future__ import annotations


class FracStarError(Exception):
    """Base class for every error raised by this package."""


class PoleError(FracStarError, ValueError):
    """Gamma function evaluated at (or within tolerance of) a pole."""

    def __init__(self, x: float):
        super().__init__(f"Gamma pole at x={x!r}")
        self.x = x


class DomainError(FracStarError, ValueError):
    """Argument outside the domain of an operation."""


class BranchError(FracStarError, ValueError):
    """No real value for a power with a non-positive base."""


class NoRootError(FracStarError):
    """No sign change was found while scanning for a root.

    ``trace`` holds the scanned ``(x, f(x))`` pairs so callers can see why.
    """

    def __init__(self, message: str, trace: list[tuple[float, float]] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


class CompatibilityError(FracStarError):
    """Vertex continuity fails before a Kirchhoff solve is attempted."""


class DegenerateError(FracStarError):
    """A linear coefficient vanishes or an estimate hits the noise floor."""


class ParseError(FracStarError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field

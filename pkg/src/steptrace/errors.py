"""Exception types shared across the reasoner."""


class DomainError(Exception):
    """Base class for all reasoner errors."""


class ParseError(DomainError):
    """Input text does not conform to the equation grammar.

    Carries the 0-based character offset and a description of what was
    expected at that position.
    """

    def __init__(self, offset: int, expected: str, found: str = ""):
        self.offset = offset
        self.expected = expected
        self.found = found
        where = f"at offset {offset}"
        detail = f"expected {expected}" + (f", found {found!r}" if found else "")
        super().__init__(f"{where}: {detail}")


class VariableError(ParseError):
    """An identifier other than the unknown `x` appeared in the input."""

    def __init__(self, offset: int, name: str):
        self.name = name
        super().__init__(offset, "the variable 'x'", name)


class NegativeRadicand(DomainError):
    """A square root was taken of a negative constant."""


class RadicalUnsupported(DomainError):
    """A value escapes the p + q*sqrt(d) exact-number representation."""


class DegreeTooHigh(DomainError):
    """An equation expands to a polynomial of degree > 2."""


class DepthCapExceeded(DomainError):
    """A lookahead depth beyond the hard cap of 8 was requested."""


class InvalidSite(DomainError):
    """A rule was applied at a site where its precondition does not hold."""


class NoDerivation(DomainError):
    """The strategy cannot reach solved form within the depth cap."""


class StrategyExhausted(DomainError):
    """No strategy continuation exists at the current state."""

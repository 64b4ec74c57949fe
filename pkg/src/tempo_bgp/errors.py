"""Exception types shared across the package."""


class TempoBgpError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(TempoBgpError):
    """Malformed input text: CSV rows, pattern files, automaton files."""


class ReferentialError(TempoBgpError):
    """An input row references an identifier that was never declared."""


class DuplicateIdError(TempoBgpError):
    """The same identifier is declared twice."""


class OrderNotConnected(TempoBgpError):
    """A supplied edge-variable order has a disconnected prefix."""


class OrderIncompatible(TempoBgpError):
    """A supplied edge-variable order contradicts the automaton."""


class OracleGuardError(TempoBgpError):
    """A brute-force oracle call exceeded its instance-size guard."""

"""Exception hierarchy shared across the engine."""


class DiffmodError(Exception):
    pass


class StructuralError(DiffmodError):
    """Mismatched rings, lengths, or malformed values."""


class DomainError(DiffmodError):
    """Input outside an operation's mathematical domain (zero divisor, singular matrix, ...)."""


class UnsupportedInputError(DiffmodError):
    """Input is valid but outside the restricted class this engine handles."""


class WitnessSearchError(DiffmodError):
    """Bounded witness-point search failed; caller may supply a witness."""


class ManifestError(DiffmodError):
    """Manifest text could not be parsed; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)

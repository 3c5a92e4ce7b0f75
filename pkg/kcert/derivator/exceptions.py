class KcertError(Exception):
    """Base class for every error raised by the derivator app."""


class RingError(KcertError):
    """Invalid ring parameters, mixed rings, or an operation the ring lacks."""


class ShapeError(KcertError):
    """Matrix, module or diagram shapes do not fit together."""


class CompositionError(KcertError):
    """Source and target of a composite do not match."""


class NotMonomorphismError(KcertError):
    """A cofiber was requested for a map that is not injective."""


class NotNaturalError(KcertError):
    """Levelwise maps that do not commute with the connecting maps."""


class WitnessedError(KcertError):
    """An error carrying a concrete counterexample."""

    def __init__(self, message, witness=''):
        super().__init__(message)
        self.witness = witness

    def __str__(self):
        base = super().__str__()
        return f'{base} (witness: {self.witness})' if self.witness else base


class OutOfRangeError(WitnessedError):
    """An index or a case formula leaves the admissible range."""


class LocalityError(WitnessedError):
    """An object whose endomorphism ring is not local."""


class SearchLimitError(KcertError):
    """A brute-force search would exceed the configured limit."""

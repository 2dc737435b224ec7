"""Exception taxonomy shared by all modules."""


class OrbintError(Exception):
    """Base class for all library errors."""


class BadCharacteristic(OrbintError):
    """Residue characteristic divides the Weyl group order."""


class UnsupportedOrder(OrbintError):
    """kappa has order larger than the supported bound (4)."""


class PrecisionExhausted(OrbintError):
    """A quantity could not be resolved at the working precision."""


class WildRamification(OrbintError):
    """p divides a ramification index; outside the tame scope."""


class NotCoprime(OrbintError):
    """Hensel seed factors are not coprime modulo the uniformizer."""


class NotRegular(OrbintError):
    """The characteristic lies outside c^heart (vanishing discriminant)."""


class NotGRegular(OrbintError):
    """Transfer image is not G-regular."""


class Inconsistent(OrbintError):
    """Two independent computations of the same invariant disagree.

    This is always a bug, never a data condition.
    """


class UnsupportedKappa(OrbintError):
    """kappa does not factor through the computed pi_0 quotient and the
    vanishing clause cannot be certified."""


class UnsupportedH(OrbintError):
    """Endoscopic group shape outside the supported list."""


class Unsupported(OrbintError):
    """Operation outside the scoped parameter range."""


class CombinatorialBlowup(OrbintError):
    """Candidate count exceeded the enumeration guard."""


class HypothesisViolated(OrbintError):
    """A formula was invoked outside its stated hypothesis."""


class ParseError(OrbintError):
    """Malformed input text; carries position information."""

    def __init__(self, message, line=1, column=None):
        self.line = line
        self.column = column
        if column is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)

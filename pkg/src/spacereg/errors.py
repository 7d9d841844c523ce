"""Exception hierarchy.

Two fatal families, mirrored by the CLI exit codes: ``InputError`` (exit 1)
for anything wrong with the data handed to us, ``NumericalError`` (exit 2)
for computations that cannot proceed on otherwise valid input.
"""


class SpaceregError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SpaceregError):
    """Invalid, malformed, or out-of-domain input data."""


class NumericalError(SpaceregError):
    """A computation is degenerate or singular and has no fallback."""


# --- input-side conditions -------------------------------------------------

class LengthMismatch(InputError):
    """Paired vectors have different lengths."""


class DimensionMismatch(InputError):
    """A matrix or vector has a shape incompatible with its partner."""


class NonPositiveValue(InputError):
    """A value that must be strictly positive is zero or negative."""


class NonPositiveDistance(InputError):
    """An off-diagonal distance is zero or negative."""


class AsymmetricDistance(InputError):
    """A distance matrix disagrees with its transpose beyond tolerance."""


class ZeroMatrix(InputError):
    """A contiguity matrix has no nonzero off-diagonal entries."""


class LagOutOfRange(InputError):
    """A temporal lag is not in 1..n-1."""


class InsufficientData(InputError):
    """Too few observations for the requested computation."""


class ZeroVariance(InputError):
    """A variable is constant and cannot be standardized."""


class ParseError(InputError):
    """A CSV file cannot be parsed; carries file/row context."""


class SchemaError(InputError):
    """A CSV file parses but does not match the expected schema."""


class UnknownId(InputError):
    """A distance record references an id absent from the attribute table."""


class MissingPair(InputError):
    """Long-form distances omit at least one unordered pair."""


class DuplicatePair(InputError):
    """Long-form distances list some unordered pair more than once."""


# --- numerical conditions --------------------------------------------------

class RankDeficient(NumericalError):
    """A design matrix is numerically rank deficient."""


class DegenerateRegression(NumericalError):
    """A regression cannot be formed (for example fewer rows than columns)."""


class DegenerateVariance(NumericalError):
    """A variance needed by a diagnostic is zero."""


class SingularSystem(NumericalError):
    """The decomposition determinant is zero; coefficients are undefined."""


class ZeroDenominator(NumericalError):
    """A closed-form ratio has a zero denominator."""

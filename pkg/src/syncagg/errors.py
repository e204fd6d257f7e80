"""Exception taxonomy shared across the package.

Every rejection that is a *verdict* (a signature failing to verify, a key
failing certification) is returned as a value, never raised.  Exceptions are
reserved for contract violations: malformed inputs, mixed backends, out-of-range
parameters, broken encodings.
"""


class SyncAggError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatchError(SyncAggError):
    """Operands belong to different group descriptions."""


class InvalidGroupOrderError(SyncAggError):
    """Requested toy modulus is not prime, or parameters are unsupported."""


class NonInvertibleScalarError(SyncAggError):
    """Attempted to invert the zero scalar."""


class MalformedEncodingError(SyncAggError):
    """Byte string is not a well-formed encoding of the expected type."""


class OffCurveError(MalformedEncodingError):
    """Decoded point is not on the curve (or not in the prime-order subgroup)."""


class IncoherentElementError(MalformedEncodingError):
    """Decoded point pair fails the coherence pairing check."""


class PeriodOutOfBoundsError(SyncAggError):
    """Period index lies outside [1, T]."""


class AggregationError(SyncAggError):
    """Base class for aggregation input rejections."""


class EmptyInputError(AggregationError):
    """Aggregation called with empty lists."""


class LengthMismatchError(AggregationError):
    """Key / message / signature lists have different lengths."""


class MixedPeriodsError(AggregationError):
    """Constituent signatures carry different periods."""


class DuplicateKeyError(AggregationError):
    """The same verification key appears twice in an aggregation input."""


class InvalidConstituentError(AggregationError):
    """A constituent signature failed verification during aggregation."""

    def __init__(self, index: int):
        super().__init__(f"invalid constituent signature at index {index}")
        self.index = index


class RegistryError(SyncAggError):
    """Registry protocol violation (not a certification verdict)."""


class SkRetrievalDisabledError(RegistryError):
    """lookup_sk called on a registry that is not in game mode."""


class GameProtocolError(SyncAggError):
    """A game harness was driven outside its contract."""


class QueryRejectedError(GameProtocolError):
    """An oracle query exceeded its budget (e.g. second one-time sign query)."""

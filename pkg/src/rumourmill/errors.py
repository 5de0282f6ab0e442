"""Exception taxonomy for the rumour mill.

Every failure a caller is expected to handle has its own class; transport
details never leak past the module that produced them.
"""


class RumourMillError(Exception):
    """Base class for all rumour mill errors."""


class OutOfRange(RumourMillError):
    """A raw hardware reading fell outside its legal range."""


class ConfigMissing(RumourMillError):
    """A required configuration entry (genre mapping, phrase list) is absent."""


class ConfigError(RumourMillError):
    """A configuration file could not be parsed."""


class EmptyCorpus(RumourMillError):
    """No documents were supplied to the model builder."""


class DocumentTooShort(RumourMillError):
    """Every supplied document was too short to contribute n-grams."""


class EmptyWeights(RumourMillError):
    """The sampler was given an empty weight vector."""


class NonPositiveWeight(RumourMillError):
    """The sampler was given a weight <= 0."""


class NonPositiveTemperature(RumourMillError):
    """The sampler was given a temperature <= 0."""


class BackendError(RumourMillError):
    """Base class for generation backend failures (triggers cache fallback)."""


class BackendUnavailable(BackendError):
    """The remote backend timed out, refused the connection, or kept erroring."""


class ProtocolError(BackendError):
    """The remote backend answered, but not in the agreed wire format."""


class NoRumourAvailable(RumourMillError):
    """Backend failed and the cache had nothing for the key; the one
    user-visible generation failure."""


class PersistenceFailure(RumourMillError):
    """A cache journal write failed; in-memory state is still valid."""


class JournalError(RumourMillError):
    """The cache journal on disk is malformed."""


class InvalidEvent(RumourMillError):
    """An input event carried an out-of-range value."""

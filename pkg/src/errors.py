"""Exceptions raised by the index modules."""


class SynIdxError(Exception):
    """Base class for every error raised by the index."""


class EmptyInput(SynIdxError):
    pass


class AlphabetTooLarge(SynIdxError):
    pass


class ConfigError(SynIdxError, ValueError):
    pass


class TauTooLarge(SynIdxError):
    pass


class OutOfRange(SynIdxError, IndexError):
    pass


class RankOutOfRange(SynIdxError, IndexError):
    pass


class DepthOutOfRange(SynIdxError, IndexError):
    pass


class TooLong(SynIdxError):
    pass


class TooShort(SynIdxError):
    pass


class BadSymbol(SynIdxError, ValueError):
    pass


class InconsistentLengths(SynIdxError):
    pass


class NotSorted(SynIdxError):
    pass


class NotPeriodic(SynIdxError):
    pass


class WrongType(SynIdxError):
    pass


class EmptyPattern(SynIdxError):
    pass


class InvalidNode(SynIdxError):
    pass


class IsRoot(SynIdxError):
    pass


class TooLargeForOracle(SynIdxError):
    pass


class CorruptIndex(SynIdxError):
    """Checksum or structural failure while reading an index file."""


class VersionMismatch(SynIdxError):
    pass

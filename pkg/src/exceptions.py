"""Error hierarchy shared by every subpackage.

Each family carries the process exit code the CLI reports for it.
"""


class HMNetError(Exception):
    exit_code = 3


# Configuration / usage errors (exit 1)

class ConfigError(HMNetError):
    exit_code = 1


class ConfigParseError(ConfigError):
    pass


class ValidationError(ConfigError, ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


# Data errors (exit 2)

class DataError(HMNetError):
    exit_code = 2


class SchemaError(DataError, ValueError):
    pass


class EmptyCorpus(DataError, ValueError):
    pass


class EmptyArticle(DataError, ValueError):
    pass


class EmptyTurn(DataError, ValueError):
    pass


class TurnTooLong(DataError, ValueError):
    pass


class EmptyMeeting(DataError, ValueError):
    pass


class MeetingTooLong(DataError, ValueError):
    pass


class UnknownRole(DataError, KeyError):
    pass


class IdOutOfRange(DataError, IndexError):
    pass


class TargetTooShort(DataError, ValueError):
    pass


class PrefixTooLong(DataError, ValueError):
    pass


class EmptyTranscript(DataError, ValueError):
    pass


class EmptyPool(DataError, ValueError):
    pass


class TooShort(DataError, ValueError):
    pass


class EmptyHypothesis(DataError, ValueError):
    pass


class VersionMismatch(DataError, ValueError):
    pass


class CorruptCheckpoint(DataError, ValueError):
    pass


# Runtime / numeric errors (exit 3)

class NumericError(HMNetError):
    exit_code = 3


class ShapeMismatch(NumericError, ValueError):
    pass


class AllMasked(NumericError, ValueError):
    pass


class NotScalar(NumericError, ValueError):
    pass


class OddDimension(NumericError, ValueError):
    pass


class EmptyStack(NumericError, ValueError):
    pass


class ZeroLength(NumericError, ValueError):
    pass


class EmptyPrefix(NumericError, ValueError):
    pass


class EmptyBatch(NumericError, ValueError):
    pass


class NonFiniteGradient(NumericError, ArithmeticError):
    pass

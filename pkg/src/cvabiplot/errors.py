"""Exception hierarchy shared by the whole package."""


class CvaBiplotError(Exception):
    """Base class for all errors raised by this package."""


class SingularScatterError(CvaBiplotError):
    """A scatter matrix that must be inverted is numerically singular."""


class InternalConsistencyError(CvaBiplotError):
    """A quantity that is guaranteed by construction came out wrong."""


class ConfigError(CvaBiplotError):
    """Bad run configuration (missing column, contradictory flags)."""

    exit_code = 2


class DataFileError(CvaBiplotError):
    """Unreadable, unparseable or empty-after-filtering input data."""

    exit_code = 4

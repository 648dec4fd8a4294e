"""Exception types raised by trajcluster."""


class TrajclusterError(Exception):
    """Base class for all library errors."""


class FormatError(TrajclusterError, ValueError):
    """Malformed or semantically invalid input file.

    ``line`` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class NetworkFormatError(FormatError):
    pass


class TrajectoryFormatError(FormatError):
    pass


class UndefinedWeightError(TrajclusterError, ValueError):
    """Weight requested for a segment no trajectory travels."""


class UndefinedModularityError(TrajclusterError, ValueError):
    """Modularity requested on a graph without edges."""


class PartitionMismatchError(TrajclusterError, ValueError):
    """Two partitions do not cover the same entity set."""

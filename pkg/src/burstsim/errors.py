"""Exception types shared across the package."""


class BurstSimError(Exception):
    pass


class ConfigError(BurstSimError, ValueError):
    """Invalid parameters or configuration."""


class TraceParseError(BurstSimError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class StatsUndefinedError(BurstSimError, ValueError):
    """Random percentage requested for a stream with fewer than two requests."""


class RegionFull(BurstSimError):
    """The request does not fit in the region's remaining space."""


class BufferExhausted(BurstSimError):
    """No empty region to swap to; the producer has to wait for a flush."""


class RegionStateError(BurstSimError):
    """Illegal region state transition."""

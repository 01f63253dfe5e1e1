"""Exception hierarchy shared by all engine modules."""


class WipError(Exception):
    """Base class for every error raised by :mod:`wipanim`."""


class InsufficientData(WipError):
    pass


class ExcessiveMotion(WipError):
    pass


class InvalidCutoff(WipError):
    pass


class NotCalibrated(WipError):
    pass


class NonMonotonicTime(WipError):
    pass


class LegOverextension(WipError):
    pass


class InvalidSpec(WipError):
    pass


class IncompleteSession(WipError):
    pass


class ConfigError(WipError):
    pass


class FrameFormatError(WipError):
    """A JSONL record could not be parsed; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class SessionError(WipError):
    """Wraps a module error with the index of the tick that raised it."""

    def __init__(self, tick, cause):
        super().__init__(f"tick {tick}: {type(cause).__name__}: {cause}")
        self.tick = tick
        self.cause = cause

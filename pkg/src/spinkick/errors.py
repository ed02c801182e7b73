"""Exception types raised by spinkick."""


class SpinKickError(Exception):
    pass


class DomainError(SpinKickError, ValueError):
    """Argument outside the domain of an operation (negative duration, bad index, ...)."""


class ConfigError(SpinKickError, ValueError):
    """Invalid kick schedule or run configuration."""


class ValidationError(SpinKickError, ValueError):
    """Input state fails a numerical sanity check (e.g. not normalized)."""

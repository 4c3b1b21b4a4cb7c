class ConfigError(ValueError):
    """Raised for configurations the protocol cannot run with."""


class RoundAborted(RuntimeError):
    """A checking round could not be completed, e.g. a sharer withheld its ops."""

"""Exception types shared across the package."""


class NsfoldError(Exception):
    """Base class for all package errors."""


class DimensionError(NsfoldError, ValueError):
    """Shapes of the operands do not line up. Carries both shapes."""

    def __init__(self, message, *shapes):
        if shapes:
            message = f"{message}: " + " vs ".join(str(tuple(s)) for s in shapes)
        super().__init__(message)
        self.shapes = tuple(tuple(s) for s in shapes)


class ConfigError(NsfoldError, ValueError):
    """Invalid configuration value or combination."""


class StateError(NsfoldError, RuntimeError):
    """Operation called in the wrong order, e.g. backward before forward."""


class DataFormatError(NsfoldError, ValueError):
    """A dataset or artifact file does not match its binary format."""


class CheckpointError(NsfoldError, ValueError):
    """Base for checkpoint load failures."""


class CheckpointVersionError(CheckpointError):
    pass


class CheckpointShapeError(CheckpointError):
    pass


class CheckpointLengthError(CheckpointError):
    pass


class AuditError(NsfoldError, RuntimeError):
    """Gradient audit could not be run on the given model."""

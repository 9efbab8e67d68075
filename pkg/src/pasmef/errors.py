class PasMefError(Exception):
    """Base class for all errors raised by pasmef."""


class EmptyStack(PasMefError):
    pass


class DecodeError(PasMefError):
    pass


class DimensionMismatch(PasMefError, ValueError):
    """Input images of one stack have different sizes."""


class SizeMismatch(PasMefError, ValueError):
    """Arrays handed to an operation do not share a shape."""


class ChannelMismatch(PasMefError, ValueError):
    pass


class InvalidLevels(PasMefError, ValueError):
    pass


class NotNormalized(PasMefError, ValueError):
    """Weights do not sum to one per pixel."""

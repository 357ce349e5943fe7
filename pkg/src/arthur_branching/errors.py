class DimensionError(ValueError):
    """Group ranks of a branching problem do not fit the model."""


class ModelError(ValueError):
    """Invalid model parameters."""


class InconsistentWitness(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = "%s (at offset %d)" % (message, position)
        super().__init__(message)

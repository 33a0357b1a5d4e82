"""Exception types raised across the toolbox."""


class EnteError(Exception):
    """Base class for all toolbox errors."""


class EmptyEnsemble(EnteError):
    pass


class RaggedRepetitions(EnteError):
    pass


class NonFiniteValue(EnteError):
    def __init__(self, rep: int, t: int):
        self.rep = rep
        self.t = t
        super().__init__(f"non-finite value at repetition {rep}, sample {t} (0-based)")


class IndexUnderflow(EnteError):
    pass


class ShapeMismatch(EnteError):
    pass


class InsufficientData(EnteError):
    pass


class KTooLarge(EnteError):
    pass


class DomainError(EnteError):
    pass


class DegenerateData(EnteError):
    pass


class InvalidPermutation(EnteError):
    pass


class UnknownMethod(EnteError):
    pass


class ParseError(EnteError):
    pass


class GridIncomplete(EnteError):
    pass


class MagicMismatch(EnteError):
    pass


class IntegrationDiverged(EnteError):
    pass


class UnstableParameters(EnteError):
    pass


class ResultMismatch(EnteError):
    pass


class IoError(EnteError):
    pass

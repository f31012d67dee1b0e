"""Exception types raised by the recovery routines."""


class RecoveryError(Exception):
    """Base class: recovery could not produce a verified result."""


class InconsistentDataError(RecoveryError):
    """The coefficients are not consistent with any object of the model class."""


class OffCircleRootError(RecoveryError):
    """An annihilating-filter root strayed from the unit circle."""


class NotRecoveredError(RecoveryError):
    """Search or multistart budget exhausted without a verified candidate.

    Distinct from InconsistentDataError: the data may still be consistent,
    the solver simply did not find the object within its budget.
    """


class PeelingError(RecoveryError):
    """Staged fiber recovery failed; carries the stage (multiplicity) index."""

    def __init__(self, stage: int, message: str):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


class AmbiguousRecoveryError(RecoveryError):
    """Two distinct measures reproduced the data within tolerance.

    ``candidates`` holds the two measures and ``witness`` their midpoint
    blend; every convex blend of the candidates shares the same coefficient
    table, so a single witness documents the whole ambiguous family.
    """

    def __init__(self, message: str, candidates, witness):
        super().__init__(message)
        self.candidates = tuple(candidates)
        self.witness = witness

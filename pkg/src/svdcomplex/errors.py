"""Exception types raised across the package."""


class NumericalFailure(RuntimeError):
    """An SVD or eigen-solver did not converge."""


class ComplexStructureError(ValueError):
    """Differential shapes do not fit together."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InconsistentRanksError(ValueError):
    """A rank list implies a negative homology dimension."""


class RankConditionError(ValueError):
    """Requested homology cannot be realised by the given dimensions."""

    MESSAGE = "The rank conditions cannot be satisfied."

    def __init__(self, message=MESSAGE):
        super().__init__(message)


class RankDecisionError(ArithmeticError):
    """Rank decisions produced an impossible profile.

    ``spectra`` holds every singular value list seen so far so the caller can
    inspect where the gap rule went wrong.
    """

    def __init__(self, message, spectra=()):
        super().__init__(message)
        self.spectra = tuple(spectra)


class RepeatedEigenvalueError(ArithmeticError):
    """A Laplacian has a repeated nonzero eigenvalue; the Laplacian method cannot proceed."""

    def __init__(self, index, values):
        vals = ", ".join(f"{v:.10g}" for v in values)
        super().__init__(f"Laplacian {index} has a repeated nonzero eigenvalue: {vals}")
        self.index = index
        self.values = tuple(values)


class DiagonalityError(ArithmeticError):
    """The conjugated block of the Laplacian method is not close to diagonal."""

    def __init__(self, index, off_diagonal):
        super().__init__(
            f"differential {index}: off-diagonal mass {off_diagonal:.3g} too large")
        self.index = index
        self.off_diagonal = off_diagonal


class SignFreedomError(ArithmeticError):
    """No admissible column sign flips give det U_i = +1 for every i."""

    def __init__(self, message, decomposition=None):
        super().__init__(message)
        self.decomposition = decomposition


class IllConditionedRankError(ArithmeticError):
    """The requested rank cuts into singular values indistinguishable from zero."""


class PenroseConditionError(ArithmeticError):
    """A finite-field pseudoinverse does not exist for this matrix."""

    def __init__(self, condition):
        text = {
            "kernel": "kernel condition violated: ker M meets its orthogonal complement",
            "image": "image condition violated: im M meets its orthogonal complement",
        }[condition]
        super().__init__(text)
        self.condition = condition

"""Exception types shared across the package."""


class DegenerateModelError(RuntimeError):
    """The tensor-train model assigns zero total weight where positive weight is required.

    Raised when a partition function is non-positive, a core has zero
    Frobenius norm, or a conditional weight vector vanishes during sampling.
    """


class DegenerateEliteError(RuntimeError):
    """An elite configuration has zero score and is unreachable under the current model."""


class IntegrationAccuracyError(RuntimeError):
    """A fixed-step integration drifted beyond its accuracy budget (raise the substep count)."""


class EvaluationError(RuntimeError):
    """An objective evaluation failed; carries the offending candidate for logging."""

    def __init__(self, message: str, candidate=None):
        super().__init__(message)
        self.candidate = candidate

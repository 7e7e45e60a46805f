"""Exceptions shared across the library."""

from __future__ import annotations


class DimensionMismatch(ValueError):
    """Vector or matrix dimensions are inconsistent with the ambient rank."""


class RankLimitExceeded(ValueError):
    """Ambient rank above the supported limit (8)."""


class NotPointedError(ValueError):
    """A pointed cone was required (e.g. no finite Hilbert basis exists)."""


class EmptyGitClass(ValueError):
    """GIT cone requested for a weight outside the weight cone."""


class UnboundedEvaluation(ValueError):
    """Polyhedral divisor evaluated outside the dual of its tail cone."""


class NonSaturatedEmbedding(ValueError):
    """Subtorus embedding whose image lattice is not saturated."""

    def __init__(self, invariant_factor: int):
        self.invariant_factor = invariant_factor
        super().__init__(
            f"embedding image is not a saturated sublattice "
            f"(invariant factor {invariant_factor})"
        )


class SaturationBoundExhausted(RuntimeError):
    """Saturation-degree search exceeded its certified bound.

    Carries the searched weight, the bound that was exhausted, and the
    per-candidate diagnoses, so callers can report the failure instead of
    accepting a wrong answer.
    """

    def __init__(self, weight, bound: int, checked: list[int]):
        self.weight = tuple(weight)
        self.bound = bound
        self.checked = list(checked)
        super().__init__(
            f"no saturated multiple of {self.weight} found with factor <= {bound}"
        )

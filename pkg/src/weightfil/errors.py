"""Exception hierarchy shared by all modules.

The CLI maps these to exit codes: SchemaError -> 1, PreconditionError -> 2,
CrossCheckError -> 3.
"""


class WeightfilError(Exception):
    pass


class SchemaError(WeightfilError):
    """Input does not parse against the expected JSON schema."""


class PreconditionError(WeightfilError):
    """A named operation precondition is violated."""


class ModuleInvariantError(PreconditionError):
    """A (phi,N)-module invariant fails; `invariant` names which one."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class FiltrationError(PreconditionError):
    pass


class SlopeDecompositionError(PreconditionError):
    """An irreducible factor of char(phi) has roots of mixed valuation, so
    the generalized eigenspaces cannot be split by slope over the rationals."""


class NilpotencyBoundError(PreconditionError):
    """N^(d+1) != 0 where the operation requires it."""


class InconclusiveError(WeightfilError):
    """A sampled (non-certified) admissibility verdict blocks a certified-only
    consumer."""


class CrossCheckError(WeightfilError):
    """Two independent computation routes disagree.  This is always a bug or
    corrupted input, never a tolerable condition."""


class EnumerationBudgetError(PreconditionError):
    """An enumeration exceeded its configured budget guard."""

"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class;
all of them derive from :class:`HomwalkError` so catch-all handling stays
possible.  Violation reports carry enough structure (indices, budgets) to be
asserted on in tests.
"""

from __future__ import annotations


class HomwalkError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameter(HomwalkError, ValueError):
    """A numeric parameter is outside its allowed domain."""


class WrongLength(HomwalkError, ValueError):
    """A value sequence does not match the vertex count of its graph."""


class RootNotZero(HomwalkError, ValueError):
    """The height at the root vertex is not zero."""


class EdgeViolation(HomwalkError, ValueError):
    """Two adjacent vertices whose heights do not differ by exactly one.

    ``i`` and ``j`` name the lexicographically smallest offending edge.
    """

    def __init__(self, i: int, j: int, message: str | None = None):
        self.i = i
        self.j = j
        super().__init__(message or f"edge ({i},{j}) violates the unit-step constraint")


class InfeasibleStructure(HomwalkError, ValueError):
    """A jump structure that no homomorphism can realize."""


class MalformedDecomposition(HomwalkError, ValueError):
    """Sign vectors inconsistent with the jump structure they decorate."""


class SignImbalance(HomwalkError, ValueError):
    """Signed chain lengths that do not sum to zero around the torus."""


class WrongFluctuationCount(HomwalkError, ValueError):
    """A fluctuation sign vector of the wrong length."""


class EmptyStructure(HomwalkError, ValueError):
    """An operation that needs at least one jump was given none."""


class IndexOutOfRange(HomwalkError, ValueError):
    """A window index outside 1..d+1."""


class TooLarge(HomwalkError, ValueError):
    """Exhaustive enumeration refused: the search space exceeds the cap."""


class InconsistentPrefix(HomwalkError, ValueError):
    """A derivative prefix that no valid homomorphism extends."""


class IllegalWord(HomwalkError, ValueError):
    """A word violating the legality constraints or the weight window."""


class NotInD(HomwalkError, ValueError):
    """A step sequence containing three equal consecutive steps."""


class WeightMismatch(HomwalkError, ValueError):
    """A prefix whose word encoding overhangs the prefix length."""


class NonCoalescence(HomwalkError, RuntimeError):
    """Coupling from the past did not coalesce within the update budget."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"no coalescence within {budget} updates")

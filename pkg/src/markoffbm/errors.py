"""Exception types shared across the package."""


class MarkoffError(Exception):
    """Base class for all library errors."""


class DegenerateParameters(MarkoffError, ValueError):
    """Raised when m == 0 or m == 4a (the projective closure is singular)."""


class ParamMismatch(MarkoffError, ValueError):
    """Two tower values built for different (a, m) were combined."""


class ZeroDivisor(MarkoffError, ArithmeticError):
    """Inversion of a zero divisor in the biquadratic tower ring."""


class CriterionFails(MarkoffError, ValueError):
    """Hensel's criterion v(f(x0)) > 2 v(f'(x0)) does not hold."""


class NotSmooth(MarkoffError, ValueError):
    """All partial derivatives vanish mod p at the requested point."""


class NotOnSurface(MarkoffError, ValueError):
    """A point does not satisfy the surface congruence."""


class NotSplit(MarkoffError, ValueError):
    """m is not a nonzero square in Q_p."""


class NotCocycle(MarkoffError, ValueError):
    """A pair of lattice vectors fails the 1-cocycle conditions."""


class RelationError(MarkoffError, ValueError):
    """Group action matrices violate their declared relations."""


class HypothesisViolation(MarkoffError, ValueError):
    """Parameters do not satisfy a family's hypotheses."""

    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__("; ".join(self.failed))

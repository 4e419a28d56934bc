"""Exception taxonomy shared across the toolkit.

Mathematical impossibility (ConditionFailed), numerical exhaustion
(PrecisionExceeded, Infeasible) and structural misuse are kept distinct so
that callers -- in particular the CLI -- can branch on them.
"""


class SosCertError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(SosCertError):
    pass


class NotZeroDimensional(SosCertError):
    """The ideal has infinitely many complex solutions."""


class ConditionFailed(SosCertError):
    """The coprimality hypothesis (I : f) + (f) = (1) does not hold; a
    nonnegativity certificate may not exist."""


class NotInvertible(SosCertError):
    """The polynomial vanishes at some root, so it has no inverse modulo
    the ideal."""


class NotPD(SosCertError):
    """First non-positive principal minor met during LDL^t; carries the
    1-based pivot index."""

    def __init__(self, index):
        super().__init__(f"matrix is not positive definite (pivot {index})")
        self.index = index


class ZeroPivot(SosCertError):
    def __init__(self, index):
        super().__init__(f"zero pivot at index {index} (no symmetric permutation fixes it)")
        self.index = index


class InfeasibleVariety(SosCertError):
    """The affine Gram constraint system has no solution."""


class PrecisionExceeded(SosCertError):
    """The precision-escalation loop hit its ceiling; the input is likely
    not strictly positive numerically."""


class ClusterAmbiguity(SosCertError):
    """Root clusters are closer than the clustering tolerance allows."""


class SingularVandermonde(SosCertError):
    """Vandermonde of the basis at the computed points is singular; the
    ideal has multiple points or clustering failed."""


class BoundaryAmbiguity(UserWarning):
    """Some constraint value sits inside the tolerance band at a root; the
    point was provisionally included in S."""


class NotStrictlyPositiveOnS(SosCertError):
    pass


class NonPositiveAtRealRoot(SosCertError):
    pass


class NonRadicalNeedsLift(SosCertError):
    """Internal routing signal: the ideal has multiple points, the strict
    certifier must go through the Hensel path."""


class NotGraded(SosCertError):
    pass


class Infeasible(SosCertError):
    """The SDP feasibility solver stalled above tolerance."""

    def __init__(self, residual):
        super().__init__(f"feasibility residual stalled at {residual:.3e}")
        self.residual = residual


class MaxIterations(SosCertError):
    pass


class ParseError(SosCertError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

"""Exception taxonomy shared across the package."""


class KashaevError(Exception):
    """Base class for all package-specific errors."""


class ConstraintViolated(KashaevError):
    """Knot parameters violate the admissibility constraint 2b+1 > 4(2a+1) > 0."""


class DegenerateVariable(KashaevError):
    """Quantum-integer base A satisfies A^4 = 1, so [k] is undefined."""


class PoleProximity(KashaevError):
    """Evaluation point is too close to a pole of a kernel function."""


class NoConvergence(KashaevError):
    """Quadrature failed to reach the requested error target within the node cap."""


class IndexOutOfRange(KashaevError):
    """Family index outside its admissible range."""


class DegenerateEvaluation(KashaevError):
    """State-sum evaluation point makes an internal quantity degenerate."""


class TooLarge(KashaevError):
    """Requested color exceeds the state-sum feasibility guard."""


class NotCoprime(KashaevError):
    """Torus-knot parameters must be coprime."""


class DegenerateCosine(KashaevError):
    """A cosine factor that should never vanish did (should be impossible)."""


class DegenerateDenominator(KashaevError):
    """Closed-form denominator vanishes at this index."""

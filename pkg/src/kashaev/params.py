"""Knot parameters, precision context, roots of unity, and quantum integers.

Everything downstream works with a pair of positive integers (a, b) describing
the cable knot T(2,2a+1)^(2,2b+1) and the derived odd constants

    P = 2a+1,   Q = 2b+1,   R = Q - 4P,

subject to the admissibility constraint Q > 4P > 0 (equivalently R >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp

from .errors import ConstraintViolated, DegenerateVariable

# Guard bits added inside workprec blocks so that returned values are clean
# at the context's nominal precision.
GUARD_BITS = 16


@dataclass(frozen=True)
class CableParams:
    """Parameters (a, b) of the cable knot, with P = 2a+1, Q = 2b+1, R = Q-4P."""

    a: int
    b: int
    P: int
    Q: int
    R: int

    def __str__(self):
        return f"T(2,{self.P})^(2,{self.Q})"


def new_cable_params(a: int, b: int) -> CableParams:
    """Validate (a, b) and derive P, Q, R.

    Requires a >= 1, b >= 1 and 2b+1 > 4(2a+1); a = 0 would make the companion
    an unknot and is rejected.
    """
    if not (isinstance(a, int) and isinstance(b, int)):
        raise ConstraintViolated(f"a, b must be integers, got {a!r}, {b!r}")
    if a < 1 or b < 1:
        raise ConstraintViolated(f"need a >= 1 and b >= 1, got a={a}, b={b}")
    P, Q = 2 * a + 1, 2 * b + 1
    if Q <= 4 * P:
        raise ConstraintViolated(f"need 2b+1 > 4(2a+1): {Q} <= {4 * P}")
    R = Q - 4 * P
    assert R >= 1 and R % 2 == 1
    return CableParams(a=a, b=b, P=P, Q=Q, R=R)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in bits plus the tolerances derived from it.

    tol_identity guards exact identities (default 2^(-bits/2)); tol_cross
    guards cross-method comparisons, where quadrature truncation dominates
    (default 1e-6).
    """

    bits: int = 128
    tol_identity: float = field(default=0.0)
    tol_cross: float = field(default=1e-6)

    def __post_init__(self):
        if self.bits < 64:
            raise ConstraintViolated(f"need bits >= 64, got {self.bits}")
        if self.tol_identity == 0.0:
            object.__setattr__(self, "tol_identity", 2.0 ** (-self.bits // 2))
        if not (self.tol_identity > 0 and self.tol_cross > 0):
            raise ConstraintViolated("tolerances must be positive")
        if self.tol_identity < 2.0 ** (-self.bits + 2) or self.tol_cross < 2.0 ** (-self.bits + 2):
            raise ConstraintViolated("tolerance not representable at this precision")

    def workprec(self, extra_bits: int = GUARD_BITS):
        """Context manager running mpmath at bits + extra_bits."""
        return mp.workprec(self.bits + extra_bits)


DEFAULT_CTX = PrecisionContext()


@dataclass(frozen=True)
class Level:
    """Color N >= 2: dimension of the coloring and order of the root of unity."""

    N: int

    def __post_init__(self):
        if self.N < 2:
            raise ConstraintViolated(f"need N >= 2, got {self.N}")

    def __int__(self):
        return self.N


def level_of(N) -> int:
    """Coerce an int or Level to a validated integer N >= 2."""
    n = int(N)
    if n < 2:
        raise ConstraintViolated(f"need N >= 2, got {n}")
    return n


def exp_pi_i(x) -> "mp.mpc":
    """e^(i*pi*x) for rational or real x, with exact mod-2 reduction for Fractions.

    Keeping the reduction in exact arithmetic preserves pairwise cancellations
    (alternating sums of unit-modulus phases) to full working precision.
    """
    if isinstance(x, Fraction) or isinstance(x, int):
        fr = Fraction(x) % 2
        t = mp.mpf(fr.numerator) / fr.denominator
    else:
        t = mp.mpf(x)
    return mp.mpc(mp.cospi(t), mp.sinpi(t))


def root_of_unity(N, ctx: PrecisionContext = DEFAULT_CTX):
    """e^(2*pi*i/N) at the context precision."""
    n = level_of(N)
    with ctx.workprec():
        return exp_pi_i(Fraction(2, n))


def quantum_integer(k: int, A, ctx: PrecisionContext = DEFAULT_CTX):
    """[k] = (A^(2k) - A^(-2k)) / (A^2 - A^(-2)).

    Raises DegenerateVariable when A^4 = 1 within tolerance (the denominator
    vanishes there).
    """
    with ctx.workprec():
        A = mp.mpc(A)
        A2 = A * A
        denom = A2 - 1 / A2
        if abs(A2 * A2 - 1) < mp.mpf(2) ** (-ctx.bits // 2):
            raise DegenerateVariable(f"A^4 = 1 within tolerance for A = {A}")
        A2k = A2 ** k
        return (A2k - 1 / A2k) / denom

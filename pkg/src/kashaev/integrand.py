"""Closed-form ingredients of the double contour integral.

The invariant is extracted from

    I_N = \\int\\int psi1(z1) psi2(z2) delta(z1,z2) e^{N theta(z1,z2)} dz1 dz2

over two copies of the line C = e^{i pi/4} R.  This module holds the phase
theta, the Gaussian weight delta, the kernels psi1/psi2, their poles and
residues, the critical point, and the one-variable saddles used when the
contours are shifted.  All formulas are explicit; the quadrature module never
re-derives them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import IndexOutOfRange, PoleProximity
from .params import CableParams, DEFAULT_CTX, PrecisionContext, exp_pi_i, level_of

# Fixed contour direction e^{i pi/4}; never a parameter.
def contour_direction():
    return exp_pi_i(Fraction(1, 4))


@dataclass(frozen=True)
class ContourSpec:
    """A line {shift + e^{i pi/4} s : s in [-s_max, s_max]} with a node budget.

    nodes is the initial Gauss-Legendre node count per unit panel; the engine
    doubles and bisects adaptively from there.
    """

    shift: complex = 0
    s_max: float = 8.0
    nodes: int = 16

    def __post_init__(self):
        if not self.s_max > 0:
            raise ValueError("s_max must be positive")
        if self.nodes < 2:
            raise ValueError("need nodes >= 2")

    def point(self, s):
        return mp.mpc(self.shift) + contour_direction() * s


@dataclass(frozen=True)
class PoleData:
    location: complex
    residue: complex
    index: int
    which: str  # "psi1" | "psi2"


def theta(p: CableParams, z1, z2):
    """-z2^2/(P pi i) - 4 (z1-z2)^2 / (R pi i) + 4 z1."""
    z1, z2 = mp.mpc(z1), mp.mpc(z2)
    pii = mp.pi * mp.mpc(0, 1)
    d = z1 - z2
    return -z2 * z2 / (p.P * pii) - 4 * d * d / (p.R * pii) + 4 * z1


def delta(p: CableParams, z1, z2):
    """z2^2/P + 4 (z1-z2)^2 / R."""
    z1, z2 = mp.mpc(z1), mp.mpc(z2)
    d = z1 - z2
    return z2 * z2 / p.P + 4 * d * d / p.R


def grad_theta(p: CableParams, z1, z2):
    """(d theta/d z1, d theta/d z2) in closed form."""
    z1, z2 = mp.mpc(z1), mp.mpc(z2)
    pii = mp.pi * mp.mpc(0, 1)
    d = z1 - z2
    g1 = -8 * d / (p.R * pii) + 4
    g2 = -2 * z2 / (p.P * pii) + 8 * d / (p.R * pii)
    return g1, g2


def psi1(z1, ctx: PrecisionContext = DEFAULT_CTX):
    """1 / (2 cosh(2 z1)); raises PoleProximity within 2^(-bits/2) of a pole."""
    with ctx.workprec():
        z1 = mp.mpc(z1)
        c = mp.cosh(2 * z1)
        if abs(c) < mp.mpf(2) ** (-ctx.bits // 2):
            raise PoleProximity(f"cosh(2 z1) ~ 0 at z1 = {z1}")
        return 1 / (2 * c)


def psi2(p: CableParams, z2, ctx: PrecisionContext = DEFAULT_CTX):
    """sinh(2 z2 / P) / (2 cosh(z2)); raises PoleProximity near poles."""
    with ctx.workprec():
        z2 = mp.mpc(z2)
        c = mp.cosh(z2)
        if abs(c) < mp.mpf(2) ** (-ctx.bits // 2):
            raise PoleProximity(f"cosh(z2) ~ 0 at z2 = {z2}")
        return mp.sinh(2 * z2 / p.P) / (2 * c)


def f_N(p: CableParams, N, z1, z2):
    """F_N(z1, z2) = delta(z1, z2) e^{N theta(z1, z2)}."""
    n = level_of(N)
    return delta(p, z1, z2) * mp.exp(n * theta(p, z1, z2))


def critical_point(p: CableParams):
    """The unique critical point (Q pi i / 2, 2 P pi i) of theta."""
    pii = mp.pi * mp.mpc(0, 1)
    return p.Q * pii / 2, 2 * p.P * pii


def poles_psi1(p: CableParams) -> list[PoleData]:
    """Poles xi_l = (2l+1) pi i / 4, 0 <= l <= 2b, with residues (-1)^(l-1) i/4.

    These are the poles of psi1 between C and C + w1.
    """
    pii = mp.pi * mp.mpc(0, 1)
    out = []
    for l in range(2 * p.b + 1):
        out.append(PoleData(location=(2 * l + 1) * pii / 4,
                            residue=(-1) ** (l - 1) * mp.mpc(0, 1) / 4,
                            index=l, which="psi1"))
    return out


def poles_psi2(p: CableParams) -> list[PoleData]:
    """Poles eta_m = (2m+1) pi i / 2, 0 <= m <= 4a+1, with residues
    (-1)^m sin((2m+1) pi / P) / 2."""
    pii = mp.pi * mp.mpc(0, 1)
    out = []
    for m in range(4 * p.a + 2):
        res = mp.mpf((-1) ** m) * mp.sinpi(mp.mpf(2 * m + 1) / p.P) / 2
        out.append(PoleData(location=(2 * m + 1) * pii / 2,
                            residue=res, index=m, which="psi2"))
    return out


def residue_psi1(p: CableParams, l: int):
    """Res(psi1, xi_l) = (-1)^(l-1) i/4, valid for every integer l."""
    return (-1) ** (l - 1) * mp.mpc(0, 1) / 4


def residue_psi2(p: CableParams, m: int):
    """Res(psi2, eta_m) = (-1)^m sin((2m+1) pi / P)/2, valid for every integer m."""
    return mp.mpf((-1) ** m) * mp.sinpi(mp.mpf(2 * m + 1) / p.P) / 2


def pole_psi1_location(p: CableParams, l: int):
    return (2 * l + 1) * mp.pi * mp.mpc(0, 1) / 4


def pole_psi2_location(p: CableParams, m: int):
    return (2 * m + 1) * mp.pi * mp.mpc(0, 1) / 2


def saddle_z1(p: CableParams, m: int):
    """zeta_m = R pi i / 2 + eta_m: critical point of z1 -> theta(z1, eta_m)."""
    if not 0 <= m <= 4 * p.a + 1:
        raise IndexOutOfRange(f"m = {m} outside [0, {4 * p.a + 1}]")
    return (p.R + 2 * m + 1) * mp.pi * mp.mpc(0, 1) / 2


def saddle_z2(p: CableParams, l: int):
    """zeta'_l = P (2l+1) pi i / Q: critical point of z2 -> theta(xi_l, z2)."""
    if not 0 <= l <= 2 * p.b:
        raise IndexOutOfRange(f"l = {l} outside [0, {2 * p.b}]")
    return mp.mpf(p.P * (2 * l + 1)) / p.Q * mp.pi * mp.mpc(0, 1)


def saddle_z1_height(p: CableParams, m: int) -> Fraction:
    """Height of zeta_m on the imaginary axis in units of pi (exact)."""
    return Fraction(p.R + 2 * m + 1, 2)


def saddle_z2_height(p: CableParams, l: int) -> Fraction:
    """Height of zeta'_l on the imaginary axis in units of pi (exact)."""
    return Fraction(p.P * (2 * l + 1), p.Q)


def min_pole_gap_z1(p: CableParams) -> Fraction:
    """Lower bound, in units of pi, for |zeta_m - xi_l| over all integer l, m.

    Heights are (R+2m+1)/2 and (2l+1)/4; the quarter-units differ in parity
    (even vs odd), so the gap is at least 1/4.
    """
    return Fraction(1, 4)


def min_pole_gap_z2(p: CableParams) -> Fraction:
    """Lower bound, in units of pi, for |zeta'_l - eta_m| over all l, m.

    2 P (2l+1) is even while Q (2m+1) is odd, so |2P(2l+1) - Q(2m+1)| >= 1
    and the height gap is at least 1/(2Q).
    """
    return Fraction(1, 2 * p.Q)

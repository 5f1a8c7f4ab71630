from fractions import Fraction

import pytest
from mpmath import mp

from kashaev import integrand as igd
from kashaev.errors import PoleProximity
from kashaev.params import exp_pi_i
from conftest import random_z


def test_theta_delta_at_zero(p17):
    with mp.workprec(150):
        assert abs(igd.theta(p17, 0, 0)) < 1e-40
        assert abs(igd.delta(p17, 0, 0)) < 1e-40


def test_theta_at_first_pole_pair(p17):
    # theta(xi_0, eta_0) = S~_3(0,0)/(2 pi i) + pi i with S~_3(0,0) = pi^2/3
    with mp.workprec(150):
        xi0 = igd.pole_psi1_location(p17, 0)
        eta0 = igd.pole_psi2_location(p17, 0)
        s3t = mp.pi ** 2 / 3
        expected = s3t / (2 * mp.pi * mp.mpc(0, 1)) + mp.pi * mp.mpc(0, 1)
        assert abs(igd.theta(p17, xi0, eta0) - expected) < 1e-40
        assert abs(igd.delta(p17, xi0, eta0) + s3t / 2) < 1e-40


def test_delta_even(p17, rng):
    with mp.workprec(150):
        for _ in range(10):
            z1, z2 = random_z(rng), random_z(rng)
            assert abs(igd.delta(p17, -z1, -z2) - igd.delta(p17, z1, z2)) < 1e-38


def test_theta_delta_relation(p17, rng):
    # theta = -delta/(pi i) + 4 z1 identically
    with mp.workprec(150):
        pii = mp.pi * mp.mpc(0, 1)
        for _ in range(10):
            z1, z2 = random_z(rng), random_z(rng)
            lhs = igd.theta(p17, z1, z2)
            rhs = -igd.delta(p17, z1, z2) / pii + 4 * z1
            assert abs(lhs - rhs) < 1e-38


def test_psi_values(p17):
    with mp.workprec(150):
        assert abs(igd.psi1(0) - mp.mpf(1) / 2) < 1e-40
        assert abs(igd.psi2(p17, 0)) < 1e-40
        for m in range(4 * p17.a + 2):
            zm = igd.saddle_z1(p17, m)
            assert abs(igd.psi1(zm) - mp.mpf(1) / 2) < 1e-38


def test_psi_pole_proximity(p17, ctx):
    with ctx.workprec():
        xi0 = igd.pole_psi1_location(p17, 0)
        eta0 = igd.pole_psi2_location(p17, 0)
    with pytest.raises(PoleProximity):
        igd.psi1(xi0, ctx)
    with pytest.raises(PoleProximity):
        igd.psi2(p17, eta0, ctx)


def test_psi_periodicity(p17, rng):
    # psi1(z + w1) = -psi1(z), psi2(z + w2) = psi2(z)
    with mp.workprec(150):
        w1, w2 = igd.critical_point(p17)
        for _ in range(8):
            z = random_z(rng)
            assert abs(igd.psi1(z + w1) + igd.psi1(z)) < 1e-36
            assert abs(igd.psi2(p17, z + w2) - igd.psi2(p17, z)) < 1e-36


def test_psi_oddness(p17, rng):
    with mp.workprec(150):
        for _ in range(8):
            z1, z2 = random_z(rng), random_z(rng)
            lhs = igd.psi1(-z1) * igd.psi2(p17, -z2)
            rhs = -igd.psi1(z1) * igd.psi2(p17, z2)
            assert abs(lhs - rhs) < 1e-36


def test_critical_point(p17, p211):
    with mp.workprec(150):
        pii = mp.pi * mp.mpc(0, 1)
        w1, w2 = igd.critical_point(p17)
        assert abs(w1 - 15 * pii / 2) < 1e-40 and abs(w2 - 6 * pii) < 1e-40
        g1, g2 = igd.grad_theta(p17, w1, w2)
        assert abs(g1) < 1e-38 and abs(g2) < 1e-38
        w1, w2 = igd.critical_point(p211)
        assert abs(w1 - 23 * pii / 2) < 1e-40 and abs(w2 - 10 * pii) < 1e-40


def test_grad_theta_finite_differences(p17, rng):
    # central differences are exact for a quadratic up to roundoff
    with mp.workprec(200):
        h = mp.mpf("1e-8")
        for _ in range(10):
            z1, z2 = random_z(rng), random_z(rng)
            g1, g2 = igd.grad_theta(p17, z1, z2)
            fd1 = (igd.theta(p17, z1 + h, z2) - igd.theta(p17, z1 - h, z2)) / (2 * h)
            fd2 = (igd.theta(p17, z1, z2 + h) - igd.theta(p17, z1, z2 - h)) / (2 * h)
            assert abs(g1 - fd1) < 1e-12
            assert abs(g2 - fd2) < 1e-12


def test_poles_printed_values(p17):
    with mp.workprec(150):
        ps1 = igd.poles_psi1(p17)
        assert len(ps1) == 2 * p17.b + 1
        assert abs(ps1[0].location - mp.pi * mp.mpc(0, 1) / 4) < 1e-40
        assert abs(ps1[0].residue + mp.mpc(0, 1) / 4) < 1e-40
        ps2 = igd.poles_psi2(p17)
        assert len(ps2) == 4 * p17.a + 2
        assert abs(ps2[0].location - mp.pi * mp.mpc(0, 1) / 2) < 1e-40
        assert abs(ps2[0].residue - mp.sqrt(3) / 4) < 1e-40


def test_residue_limit_oracle(p17, ctx200):
    # (z - xi) psi1(z) -> residue along 4 approach directions; psi1's Laurent
    # part is even around the pole so each direction converges quadratically,
    # while psi2 needs the directions averaged to cancel the odd orders
    with mp.workprec(260):
        eps = mp.mpf("1e-11")
        for l in (0, 1, 5):
            xi = igd.pole_psi1_location(p17, l)
            res = igd.residue_psi1(p17, l)
            for d in range(4):
                z = xi + eps * exp_pi_i(Fraction(d, 2))
                assert abs((z - xi) * igd.psi1(z, ctx200) - res) < 1e-20
        for m in (0, 3):
            eta = igd.pole_psi2_location(p17, m)
            res = igd.residue_psi2(p17, m)
            vals = []
            for d in range(4):
                z = eta + eps * exp_pi_i(Fraction(d, 2))
                vals.append((z - eta) * igd.psi2(p17, z, ctx200))
            avg = sum(vals) / 4
            assert abs(avg - res) < 1e-20


def test_saddle_values(p17):
    with mp.workprec(150):
        pii = mp.pi * mp.mpc(0, 1)
        assert abs(igd.saddle_z1(p17, 0) - 2 * pii) < 1e-40
        assert abs(igd.saddle_z2(p17, 0) - pii / 5) < 1e-40


def test_saddles_are_critical(p17):
    with mp.workprec(150):
        for m in range(4 * p17.a + 2):
            zm = igd.saddle_z1(p17, m)
            eta = igd.pole_psi2_location(p17, m)
            g1, _ = igd.grad_theta(p17, zm, eta)
            assert abs(g1) < 1e-38
        for l in range(2 * p17.b + 1):
            xi = igd.pole_psi1_location(p17, l)
            zp = igd.saddle_z2(p17, l)
            _, g2 = igd.grad_theta(p17, xi, zp)
            assert abs(g2) < 1e-38


def test_completed_squares(p17, rng):
    with mp.workprec(150):
        pii = mp.pi * mp.mpc(0, 1)
        for _ in range(6):
            z1, z2 = random_z(rng, 3.0), random_z(rng, 3.0)
            l = rng.randrange(0, 2 * p17.b + 1)
            xi = igd.pole_psi1_location(p17, l)
            zp = igd.saddle_z2(p17, l)
            lhs = igd.theta(p17, xi, z2)
            rhs = (igd.theta(p17, xi, zp)
                   - p17.Q / (p17.P * p17.R * pii) * (z2 - zp) ** 2)
            assert abs(lhs - rhs) < 1e-36
            m = rng.randrange(0, 4 * p17.a + 2)
            eta = igd.pole_psi2_location(p17, m)
            zm = igd.saddle_z1(p17, m)
            lhs = igd.theta(p17, z1, eta)
            rhs = igd.theta(p17, zm, eta) - 4 / (p17.R * pii) * (z1 - zm) ** 2
            assert abs(lhs - rhs) < 1e-36


def test_f_N_closed_forms(p17):
    # F_N at (xi_l, eta_m) and at (xi_l, zeta'_l) against the closed forms
    with mp.workprec(200):
        for N in (2, 3, 5):
            for (l, m) in ((0, 0), (3, 1), (14, 5)):
                xi = igd.pole_psi1_location(p17, l)
                eta = igd.pole_psi2_location(p17, m)
                dd = (2 * l + 1) - 2 * (2 * m + 1)
                s3t = 2 * mp.pi ** 2 * (mp.mpf((2 * m + 1) ** 2) / (4 * p17.P)
                                        + mp.mpf(dd * dd) / (4 * p17.R))
                expected = ((-1) ** (N - 1) / mp.mpf(2) * s3t
                            * mp.exp(N * s3t / (2 * mp.pi * mp.mpc(0, 1))))
                assert abs(igd.f_N(p17, N, xi, eta) - expected) < 1e-35
            for l in (0, 2):
                xi = igd.pole_psi1_location(p17, l)
                zp = igd.saddle_z2(p17, l)
                s1 = mp.mpf((2 * l + 1) ** 2) * mp.pi ** 2 / (2 * p17.Q)
                expected = ((-1) ** (N - 1) / mp.mpf(2) * s1
                            * mp.exp(N * s1 / (2 * mp.pi * mp.mpc(0, 1))))
                assert abs(igd.f_N(p17, N, xi, zp) - expected) < 1e-35


def test_pole_saddle_gaps(p17, p211):
    # zeta_m vs xi poles: at least pi/4 apart; zeta'_l vs eta poles: pi/(2Q)
    with mp.workprec(120):
        for p in (p17, p211):
            assert igd.min_pole_gap_z1(p) == Fraction(1, 4)
            assert igd.min_pole_gap_z2(p) == Fraction(1, 2 * p.Q)
            worst1 = min(abs(igd.saddle_z1(p, m) - igd.pole_psi1_location(p, l))
                         for m in range(4 * p.a + 2) for l in range(3 * p.b))
            assert worst1 > float(igd.min_pole_gap_z1(p)) * float(mp.pi) - 1e-20
            worst2 = min(abs(igd.saddle_z2(p, l) - igd.pole_psi2_location(p, m))
                         for l in range(2 * p.b + 1) for m in range(4 * p.a + 2))
            assert worst2 > float(igd.min_pole_gap_z2(p)) * float(mp.pi) - 1e-20


def test_contour_spec():
    c = igd.ContourSpec(shift=0, s_max=5.0, nodes=16)
    with mp.workprec(100):
        z = c.point(mp.mpf(1))
        assert abs(z - exp_pi_i(Fraction(1, 4))) < 1e-25
    with pytest.raises(ValueError):
        igd.ContourSpec(s_max=-1.0)
    with pytest.raises(ValueError):
        igd.ContourSpec(nodes=1)

import math
from fractions import Fraction

from mpmath import mp

from kashaev import asymptotics as asy
from kashaev import integrand as igd
from kashaev import quadrature as qd
from kashaev import skein
from kashaev.params import PrecisionContext, exp_pi_i


def test_integrate_line_gaussian(ctx):
    # f = e^{-N z^2/(pi i)} along the line through 0: pi e^{i pi/4} / sqrt(N)
    N = 10
    with ctx.workprec(64):
        pii = mp.pi * mp.mpc(0, 1)

        def f(z):
            return mp.exp(-N * z * z / pii)

        contour = igd.ContourSpec(shift=0, s_max=8.0, nodes=16)
        res = qd.integrate_line(f, contour, ctx, target_abs=mp.mpf(10) ** -28)
        expected = mp.pi * exp_pi_i(Fraction(1, 4)) / mp.sqrt(N)
        assert abs(res.value - expected) / abs(expected) < 1e-20
        assert res.error_estimate < 1e-24


def test_integrate_line_zero_and_odd(ctx):
    with ctx.workprec():
        contour = igd.ContourSpec(shift=0, s_max=6.0, nodes=16)
        res = qd.integrate_line(lambda z: mp.mpc(0), contour, ctx)
        assert res.value == 0
        pii = mp.pi * mp.mpc(0, 1)
        res = qd.integrate_line(lambda z: z * mp.exp(-3 * z * z / pii),
                                contour, ctx, target_abs=mp.mpf(10) ** -25)
        assert abs(res.value) < mp.mpf(10) ** -24 + res.error_estimate


def test_node_doubling_decreases():
    # per-panel doubling gaps shrink monotonically (within a factor 2)
    with mp.workprec(200):
        pii = mp.pi * mp.mpc(0, 1)

        def g(s):
            z = exp_pi_i(Fraction(1, 4)) * s
            return mp.exp(-5 * z * z / pii)

        vals = [qd._panel_sum(g, mp.mpf(0), mp.mpf(2), n, 200)
                for n in (4, 8, 16, 32)]
        gaps = [abs(vals[i + 1] - vals[i]) for i in range(3)]
        assert gaps[1] < 2 * gaps[0]
        assert gaps[2] < 2 * gaps[1]


def test_f3_closed_form_vs_direct(p17, ctx):
    with ctx.workprec(64):
        for N in (2, 3, 11):
            for (l, m) in ((0, 0), (5, 2), (14, 5)):
                xi = igd.pole_psi1_location(p17, l)
                eta = igd.pole_psi2_location(p17, m)
                direct = igd.f_N(p17, N, xi, eta)
                assert abs(qd.f3_value(p17, N, l, m) - direct) < 1e-30


def test_I3_closed_sum_vs_direct_products(p17, ctx):
    # the double residue sum assembled from raw integrand values
    with ctx.workprec(64):
        for N in (3, 11):
            two_pi_i = 2 * mp.pi * mp.mpc(0, 1)
            acc = mp.mpc(0)
            for l in range(2 * p17.b + 1):
                for m in range(4 * p17.a + 2):
                    xi = igd.pole_psi1_location(p17, l)
                    eta = igd.pole_psi2_location(p17, m)
                    acc += (igd.residue_psi1(p17, l) * igd.residue_psi2(p17, m)
                            * igd.f_N(p17, N, xi, eta))
            acc *= two_pi_i ** 2
            r = qd.compute_I_k(p17, N, 3, ctx)
            assert abs(r.value - acc) < 1e-27 * abs(acc)


def test_saddle_line_atoms_vs_generic_engine(p17, ctx):
    # the specialized saddle-line integrals against the generic line engine
    with mp.workprec(220):
        N = 3
        l, m = 1, 0
        xi = igd.pole_psi1_location(p17, l)
        zp = igd.saddle_z2(p17, l)
        v, e, _ = qd._saddle_line_z2(p17, N, l, 20)
        contour = igd.ContourSpec(shift=zp, s_max=9.0, nodes=16)
        ref = qd.integrate_line(
            lambda z2: igd.psi2(p17, z2) * igd.f_N(p17, N, xi, z2),
            contour, PrecisionContext(200), target_abs=mp.mpf(10) ** -26,
            prec_bits=220)
        assert abs(v - ref.value) < 1e-22
        eta = igd.pole_psi2_location(p17, m)
        zm = igd.saddle_z1(p17, m)
        v, e, _ = qd._saddle_line_z1(p17, N, m, 20)
        contour = igd.ContourSpec(shift=zm, s_max=9.0, nodes=16)
        ref = qd.integrate_line(
            lambda z1: igd.psi1(z1) * igd.f_N(p17, N, z1, eta),
            contour, PrecisionContext(200), target_abs=mp.mpf(10) ** -26,
            prec_bits=220)
        assert abs(v - ref.value) < 1e-22


def test_printed_vs_decomposed_lines(p17, ctx200):
    # the second-level contour shift is exact at both parities
    for N in (2, 3):
        with ctx200.workprec():
            i1d = qd.compute_I_k(p17, N, 1, ctx200, method="direct",
                                 target_rel=1e-20)
            i1x = qd.compute_I_k(p17, N, 1, ctx200, method="decomposed",
                                 target_rel=1e-20)
            assert abs(i1d.value - i1x.value) < 1e-18 * abs(i1x.value)
            i2d = qd.compute_I_k(p17, N, 2, ctx200, method="direct",
                                 target_rel=1e-20)
            i2x = qd.compute_I_k(p17, N, 2, ctx200, method="decomposed",
                                 target_rel=1e-20)
            assert abs(i2d.value - i2x.value) < 1e-18 * abs(i2x.value)


def test_cancellation_estimate(p17, p211):
    # peak of Re(N theta) on the raw contours: N pi Q / 2
    for p in (p17, p211):
        for N in (2, 5):
            expected = N * math.pi * p.Q / 2
            got = qd.cancellation_nats(p, N, 0, 0)
            assert abs(got - expected) < 1e-6 * expected
    # on the fully shifted contours the exponent is nonpositive
    with mp.workprec(80):
        w1 = p17.Q * mp.pi * mp.mpc(0, 1) / 2
        w2 = 2 * p17.P * mp.pi * mp.mpc(0, 1)
        assert qd.cancellation_nats(p17, 5, w1, w2) < 1e-9


def test_direct_cost_estimate_blowup(p17):
    # the raw-contour route at N = 51 is out of computational reach
    est = qd.direct_cost_estimate(p17, 51, want_digits=24)
    assert est["cancellation_digits"] > 500
    assert est["est_seconds"] > 3600 * 24
    est2 = qd.direct_cost_estimate(p17, 2, want_digits=10)
    assert est2["est_seconds"] < 3600


def test_shift_identity_small_N(p17, ctx):
    # I_N against the four pieces at modest accuracy (full-accuracy version
    # in the acceptance suite)
    N = 2
    with ctx.workprec(64):
        res = qd.compute_I_N(p17, N, ctx, method="direct", target_rel=1e-8)
        tot = sum(qd.compute_I_k(p17, N, k, ctx, target_rel=1e-8).value
                  for k in range(4))
        assert abs(res.value - tot) / abs(res.value) < 1e-8


def test_alt_shift_reconstruction(p17, ctx):
    # the alternative shift system agrees with the standard pieces
    N = 3
    with ctx.workprec(64):
        alt = qd.compute_I_N(p17, N, ctx, method="alt", target_rel=1e-10)
        tot = sum(qd.compute_I_k(p17, N, k, ctx, target_rel=1e-10).value
                  for k in range(4))
        assert abs(alt.value - tot) / abs(tot) < 1e-9
        assert alt.method == "alt-shift"


def test_compute_I_N_auto_routes(p17, ctx):
    assert qd.compute_I_N(p17, 51, ctx, target_rel=1e-6).method == "alt-shift"


def test_cross_method_and_framing_variant(p17, ctx):
    # quadrature against the braid oracle at N = 2; only the derived
    # normalization phase matches
    N = 2
    with ctx.workprec(64):
        res = qd.compute_I_N(p17, N, ctx, method="direct", target_rel=1e-8)
        js = skein.oracle_jones(p17, N, ctx)
        scale = qd.jones_scale(p17, N)
        j_derived = asy.framing_phase(p17, N, "derived") * scale * res.value
        j_printed = asy.framing_phase(p17, N, "printed") * scale * res.value
        assert abs(j_derived - js) / abs(js) < 1e-7
        assert abs(j_printed - js) / abs(js) > 0.1
        # reconstruct I_N from the oracle value through the normalization
        i_back = qd.invariant_to_I(p17, N, js, ctx)
        assert abs(i_back - res.value) / abs(res.value) < 1e-7


def test_J3_vs_closed_form(p17, ctx):
    with ctx.workprec(64):
        for N in (3, 11):
            j3 = qd.compute_J_k(p17, N, 3, ctx)
            pf = asy.proof_form_J3(p17, N, ctx)
            assert abs(j3 - pf) < 1e-20 * abs(pf)


def test_Jk_sum_equals_JN(p17, ctx):
    N = 2
    with ctx.workprec(64):
        tot = sum(qd.compute_J_k(p17, N, k, ctx, target_rel=1e-10)
                  for k in range(4))
        res = qd.compute_I_N(p17, N, ctx, method="direct", target_rel=1e-10)
        jn = qd.jones_scale(p17, N) * res.value
        assert abs(tot - jn) / abs(jn) < 1e-9


def test_J0_rescaled_bounded(p17, ctx):
    # I_0 N^2 stays bounded as N grows
    with ctx.workprec(64):
        vals = []
        for N in (25, 51, 101):
            r = qd.compute_I_k(p17, N, 0, ctx, target_rel=1e-8)
            vals.append(abs(r.value) * N ** 2)
        assert max(vals) < 20 * min(vals) + 10


def test_J2_remainder_sqrtN(p17, ctx):
    # the z2-residue block minus its leading form grows like sqrt(N)
    with ctx.workprec(64):
        ns = (25, 51, 101)
        resid = []
        for N in ns:
            j2 = qd.compute_J_k(p17, N, 2, ctx)
            l2 = asy.proof_form_J2(p17, N, ctx, variant="derived")
            resid.append(float(abs(j2 - l2)))
        slope = (math.log(resid[-1] / resid[0])
                 / math.log(ns[-1] / ns[0]))
        assert 0.2 < slope < 0.85


def test_I0_oddeven_reduced_form(p17, ctx):
    # the fully shifted double integral equals the odd/even-reduced raw form
    N = 5
    with ctx.workprec(64):
        r0 = qd.compute_I_k(p17, N, 0, ctx, target_rel=1e-10)
        pii = mp.pi * mp.mpc(0, 1)

        def f(z1):
            contour2 = igd.ContourSpec(shift=0, s_max=7.0, nodes=16)
            inner = qd.integrate_line(
                lambda z2: (igd.psi2(p17, z2) * 4 * pii * z1
                            * mp.exp(-N * igd.delta(p17, z1, z2) / pii)),
                contour2, ctx, target_abs=mp.mpf(10) ** -16)
            return igd.psi1(z1) * inner.value

        contour1 = igd.ContourSpec(shift=0, s_max=7.0, nodes=16)
        outer = qd.integrate_line(f, contour1, ctx, target_abs=mp.mpf(10) ** -14)
        reduced = (-1) ** (N - 1) * outer.value
        assert abs(r0.value - reduced) < 1e-9 * max(1, abs(r0.value))

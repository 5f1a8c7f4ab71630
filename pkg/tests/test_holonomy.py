from fractions import Fraction

import pytest
from mpmath import mp

from kashaev import holonomy as ho
from kashaev.errors import DegenerateDenominator, IndexOutOfRange

U_SAMPLES = (0, "0.3", ("0.1", "0.2"), ("1.7", "-0.4"))


def _us():
    out = []
    for u in U_SAMPLES:
        if isinstance(u, tuple):
            out.append(mp.mpc(*u))
        else:
            out.append(mp.mpc(u))
    return out


def test_relators_words(p17):
    r1, r2, r3 = ho.relators(p17)
    assert str(r1) == "x y x y^-1 x^-1 y^-1"
    # second relator letter count before reduction is finite and as built
    assert r2.exponent_sums() == {"x": p17.b - 2 * p17.a - 1,
                                  "y": 2 * p17.a + 1, "p": 0, "t": -1}
    assert str(ho.meridian()) == "p"


def test_longitude_word(p17):
    lam = ho.longitude(p17)
    s = lam.exponent_sums()
    assert s == {"x": 2 * p17.b - 4 * p17.a - 2, "y": 4 * p17.a + 2,
                 "p": -4 * p17.b, "t": 0}


def test_word_eval_basics(p17, ctx):
    with ctx.workprec():
        rep = ho.rho_an(p17, 1, mp.mpf("0.2"), ctx)
        assert ho.word_eval(rep, ho.GroupWord(())) == ho.MAT_ID
        got = ho.word_eval(rep, ho.meridian())
        assert ho.mat_maxdiff(got, rep.gen_images["p"]) < 1e-35


def test_relator_defects_all_families(p17, ctx):
    tol = 1e-25
    with ctx.workprec():
        for u in _us():
            for l in range(2 * p17.b + 1):
                if ho.rep_degenerate("AN", p17, (l,)):
                    continue
                rep = ho.rho_an(p17, l, u, ctx)
                assert ho.relator_defect(rep, p17, ctx) < tol
            for m in range(4 * p17.a + 2):
                if ho.rep_degenerate("NA", p17, (m,)):
                    continue
                rep = ho.rho_na(p17, m, u, ctx)
                assert ho.relator_defect(rep, p17, ctx) < tol
            for j in range(p17.R):
                for k in range(4 * p17.a + 2):
                    if ho.rep_degenerate("NN", p17, (j, k)):
                        continue
                    rep = ho.rho_nn(p17, j, k, u, ctx)
                    assert ho.relator_defect(rep, p17, ctx) < tol


def test_degenerate_orbit_not_representation(p17, ctx):
    # at P | (2m+1) etc. the printed matrices genuinely fail the relators;
    # these orbits are unreachable from the canonical ranges and carry tau = 0
    with ctx.workprec():
        assert ho.rep_degenerate("NA", p17, (1,))
        rep = ho.rho_na(p17, 1, 0, ctx)
        assert ho.relator_defect(rep, p17, ctx) > 1
        assert ho.rep_degenerate("AN", p17, (p17.b,))
        rep = ho.rho_an(p17, p17.b, 0, ctx)
        assert ho.relator_defect(rep, p17, ctx) > 1
        # hand-checked value of the first relator image at u=0, m=1
        r1 = ho.relators(p17)[0]
        img = ho.word_eval(ho.rho_na(p17, 1, 0, ctx), r1)
        assert max(abs(x - y) for x, y in
                   zip(img, (mp.mpf(25), mp.mpf(18), mp.mpf(18), mp.mpf(13)))) < 1e-30


def test_determinants_and_random_words(p17, ctx, rng):
    with ctx.workprec():
        u = mp.mpc("0.23", "0.11")
        for rep in (ho.rho_an(p17, 2, u, ctx), ho.rho_na(p17, 0, u, ctx),
                    ho.rho_nn(p17, 0, 0, u, ctx)):
            for g in "xypt":
                assert abs(ho.mat_det(rep.gen_images[g]) - 1) < 1e-35
            for _ in range(5):
                word = ho.GroupWord.of([(rng.choice("xypt"),
                                         rng.choice((-2, -1, 1, 2)))
                                        for _ in range(10)])
                assert abs(ho.mat_det(ho.word_eval(rep, word)) - 1) < 1e-30


def test_longitude_closed_forms(p17, ctx):
    with ctx.workprec():
        u = mp.mpc("0.3", "0.1")
        for fam, rep in (("AN", ho.rho_an(p17, 1, u, ctx)),
                         ("NA", ho.rho_na(p17, 0, u, ctx)),
                         ("NN", ho.rho_nn(p17, 0, 0, u, ctx))):
            got = ho.word_eval(rep, ho.longitude(p17))
            want = ho.longitude_matrix_closed(fam, p17, u)
            assert ho.mat_maxdiff(got, want) < 1e-30


def test_longitude_an_at_several_l(p17, ctx):
    with ctx.workprec():
        u = mp.mpc("0.3", "0.1")
        for l in (0, 1, 2):
            rep = ho.rho_an(p17, l, u, ctx)
            got = ho.word_eval(rep, ho.longitude(p17))
            want = ho.longitude_matrix_closed("AN", p17, u)
            assert ho.mat_maxdiff(got, want) < 1e-30


def test_longitude_na_power_identity(p17, ctx):
    with ctx.workprec():
        u = mp.mpc("0.17", "0.05")
        rep = ho.rho_na(p17, 0, u, ctx)
        lhs = ho.word_eval(rep, ho.longitude(p17))
        rhs = ho.mat_pow(rep.gen_images["p"], -8 * p17.P)
        assert ho.mat_maxdiff(lhs, rhs) < 1e-30


def test_peripheral_commutativity(p17, ctx):
    with ctx.workprec(96):
        u = mp.mpc("0.3", "0.1")
        for rep in (ho.rho_an(p17, 1, u, ctx), ho.rho_na(p17, 0, u, ctx),
                    ho.rho_nn(p17, 2, 0, u, ctx)):
            lam = ho.word_eval(rep, ho.longitude(p17))
            mu = ho.word_eval(rep, ho.meridian())
            assert ho.mat_maxdiff(ho.mat_mul(lam, mu), ho.mat_mul(mu, lam)) < 1e-30


def test_u_zero_removable_limits(p17):
    # generic evaluation at u = 1e-6 against the series branch, and the exact
    # -2c value at u = 0
    with mp.workprec(200):
        for c in (3, 7, 2 * p17.b + 1):
            assert abs(ho.sinh_ratio(c, 0) - 2 * c) < 1e-40
            u = mp.mpf("1e-6")
            generic = mp.sinh(c * u) / mp.sinh(u / 2)
            series = ho.sinh_ratio(c, mp.mpf("1e-9")) * 0 + ho.sinh_ratio(c, u)
            assert abs(generic - series) < 1e-20
            # the series branch itself, evaluated where it activates
            ub = mp.mpf("0.5e-8")
            assert abs(ho.sinh_ratio(c, ub) - mp.sinh(c * ub) / mp.sinh(ub / 2)) < 1e-35


def test_u_zero_vs_small_u_representation(p17, ctx):
    with ctx.workprec():
        r0 = ho.rho_na(p17, 0, 0, ctx)
        r1 = ho.rho_na(p17, 0, mp.mpf("1e-12"), ctx)
        for g in "xypt":
            assert ho.mat_maxdiff(r0.gen_images[g], r1.gen_images[g]) < 1e-10


def test_symmetries(p17, ctx):
    rep = ho.symmetry_checks(p17, ctx, mp.mpc("0.2", "0.1"))
    for name in ("an_period", "na_period", "na_reflect", "nn_k_period",
                 "nn_k_reflect", "nn_j_period"):
        assert rep[name] < 1e-30
    assert rep["an_reflect_conj"] < 1e-30
    assert rep["an_reflect_traces"] < 1e-30
    # the printed conjugator matrix does not fix the shared p image
    assert rep["an_reflect_printed_R"] > 0.1


def test_reflection_intertwiner_all_generators(p17, ctx):
    with ctx.workprec():
        u = mp.mpc("0.2")
        for l in (0, 1, 2):
            C = ho.reflection_intertwiner(p17, l, u, ctx)
            Ci = ho.mat_inv(C)
            lo = ho.rho_an(p17, l, u, ctx)
            hi = ho.rho_an(p17, 2 * p17.b - l, u, ctx)
            for g in "xypt":
                got = ho.mat_mul(C, ho.mat_mul(hi.gen_images[g], Ci))
                assert ho.mat_maxdiff(got, lo.gen_images[g]) < 1e-30


def test_nn_trace_formula_and_separation(p17, ctx):
    with ctx.workprec():
        py = ho.GroupWord.of([("p", 1), ("y", 1)])
        for (j, k) in ((0, 0), (1, 0), (2, 3)):
            rep = ho.rho_nn(p17, j, k, 0, ctx)
            got = ho._tr(ho.word_eval(rep, py))
            want = ho.trace_py_closed(p17, j, k)
            assert abs(got - want) < 1e-30
        # non-conjugacy of (j,k) and (R-1-j, k): the py traces separate
        for (j, k) in ((0, 0), (0, 2), (1, 2)):
            jr = p17.R - 1 - j
            if jr == j:
                continue
            t1 = ho.trace_py_closed(p17, j, k)
            t2 = ho.trace_py_closed(p17, jr, k)
            assert abs(t1 - t2) > 1e-10


def test_cs_values(p17):
    assert ho.cs_value("AN", p17, (0,)).coeff == Fraction(1, 30)
    assert ho.cs_value("NA", p17, (0,)).coeff == Fraction(1, 6)
    assert ho.cs_value("NN", p17, (0, 0)).coeff == Fraction(1, 3)
    assert "d1" in ho.cs_value("AN", p17, (0,)).linear_term_note
    with pytest.raises(IndexOutOfRange):
        ho.cs_value("AN", p17, (2 * p17.b + 1,))


def test_torsion_duality(p17, p211, ctx):
    from kashaev import asymptotics as asy
    with ctx.workprec():
        for p in (p17, p211):
            for l in range(2 * p.b + 1):
                if ho.torsion_degenerate("AN", p, (l,)):
                    with pytest.raises(DegenerateDenominator):
                        ho.torsion_value("AN", p, (l,), ctx)
                    continue
                tau, _ = asy.tau_S_an(p, l, ctx)
                tv = ho.torsion_value("AN", p, (l,), ctx)
                assert abs(tau ** 2 * tv.value - 1) < 1e-30
            for m in range(4 * p.a + 2):
                if ho.torsion_degenerate("NA", p, (m,)):
                    continue
                tau, _ = asy.tau_S_na(p, m, ctx)
                tv = ho.torsion_value("NA", p, (m,), ctx)
                assert abs(tau ** 2 * tv.value - 1) < 1e-30
            for (j, k) in asy.index_set_B(p).pairs:
                if ho.torsion_degenerate("NN", p, (j, k)):
                    continue
                tau, _ = asy.tau_S_nn(p, j, k, ctx)
                tv = ho.torsion_value("NN", p, (j, k), ctx)
                assert abs(tau ** 2 * tv.value - 1) < 1e-30


def test_abelianization(p17, p211):
    for p in (p17, p211):
        ab = ho.abelianization(p)
        assert ab["divisors"] == [1, 1, 1]
        cm = ab["classmap"]
        assert cm["p"] == 1
        assert cm["x"] == cm["y"] == 2
        assert cm["t"] == 2 * p.b
        assert ho.word_class(ho.longitude(p), cm) == 0
        for r in ho.relators(p):
            assert ho.word_class(r, cm) == 0

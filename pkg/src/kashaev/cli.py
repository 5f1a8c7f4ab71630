"""Batch command-line surface emitting machine-readable JSON reports.

Each subcommand assembles a report {command, params, results, checks, timing};
results carry a method tag (quadrature | skein | closed-form), every check
carries its measured value and tolerance, and complex numbers are serialized
as {re, im} decimal strings at full precision.  Reports are deterministic for
fixed inputs and precision; wall-clock timing lives in its own top-level key.

Exit codes: 0 all checks pass, 2 some check failed, 1 operational error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from fractions import Fraction

from mpmath import mp

from . import asymptotics as asy
from . import holonomy as ho
from . import quadrature as qd
from . import skein
from .errors import KashaevError
from .params import PrecisionContext, exp_pi_i, new_cable_params


def _num(x, dps):
    return mp.nstr(mp.mpf(x), dps, strip_zeros=False)


def _cnum(z, dps):
    z = mp.mpc(z)
    return {"re": _num(mp.re(z), dps), "im": _num(mp.im(z), dps)}


def _result(label, value, method, dps):
    if isinstance(value, (int, float)) or (hasattr(value, "imag") and value.imag == 0):
        try:
            return {"label": label, "value": _num(value, dps), "method": method}
        except TypeError:
            pass
    return {"label": label, "value": _cnum(value, dps), "method": method}


def _check(name, measured, tolerance):
    ok = bool(measured <= tolerance)
    return {"name": name, "status": "pass" if ok else "fail",
            "measured": mp.nstr(mp.mpf(measured), 8),
            "tolerance": mp.nstr(mp.mpf(tolerance), 8)}


def _ctx(args) -> PrecisionContext:
    bits = args.prec or int(os.environ.get("KASHAEV_PREC_BITS", "128"))
    return PrecisionContext(bits=bits)


def _loglog_slope(ns, resids):
    xs = [math.log(n) for n in ns]
    ys = [math.log(max(float(r), 1e-300)) for r in resids]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def cmd_exact(args) -> tuple:
    ctx = _ctx(args)
    p = new_cable_params(args.a, args.b)
    dps = int(ctx.bits * 0.3) + 2
    report = {"command": "exact",
              "params": {"a": args.a, "b": args.b, "N": args.N,
                         "method": args.method, "prec_bits": ctx.bits}}
    results, checks, timing = [], [], {}
    jq = js = None
    if args.method in ("quadrature", "both"):
        t0 = time.time()
        jq, res = qd.exact_jones_result(p, args.N, ctx)
        timing["quadrature_s"] = round(time.time() - t0, 3)
        results.append(_result("J_N", jq, "quadrature", dps))
        results.append({"label": "I_N_error_estimate",
                        "value": mp.nstr(mp.mpf(res.error_estimate), 6),
                        "method": "quadrature"})
        results.append({"label": "I_N_route", "value": res.method,
                        "method": "quadrature"})
    if args.method in ("skein", "both"):
        t0 = time.time()
        js = skein.oracle_jones(p, args.N, ctx)
        timing["skein_s"] = round(time.time() - t0, 3)
        results.append(_result("J_N", js, "skein", dps))
    if jq is not None and js is not None:
        with ctx.workprec():
            dev = abs(jq - js) / abs(js)
        checks.append(_check("cross_method_relative_deviation", dev, ctx.tol_cross))
    report.update(results=results, checks=checks)
    return report, timing


def cmd_decompose(args) -> tuple:
    ctx = _ctx(args)
    p = new_cable_params(args.a, args.b)
    N = args.N
    dps = int(ctx.bits * 0.3) + 2
    target = 10.0 ** (-int(ctx.bits * 0.106))  # ~2^-0.35bits
    report = {"command": "decompose",
              "params": {"a": args.a, "b": args.b, "N": N, "prec_bits": ctx.bits}}
    results, checks, timing = [], [], {}
    t0 = time.time()
    res = qd.compute_I_N(p, N, ctx, target_rel=target)
    timing["I_N_s"] = round(time.time() - t0, 3)
    results.append(_result("I_N", res.value, "quadrature", dps))
    results.append({"label": "I_N_route", "value": res.method, "method": "quadrature"})
    pieces = []
    t0 = time.time()
    for k in range(4):
        r = qd.compute_I_k(p, N, k, ctx, target_rel=target)
        pieces.append(r)
        results.append(_result(f"I_{k}N", r.value, "quadrature", dps))
    timing["pieces_s"] = round(time.time() - t0, 3)
    with ctx.workprec(64):
        tot = sum(r.value for r in pieces)
        shift_resid = abs(res.value - tot) / abs(res.value)
        checks.append(_check("contour_shift_identity_relative", shift_resid,
                             10 * target))
        jsc = qd.jones_scale(p, N)
        j3 = jsc * pieces[3].value
        pf3 = asy.proof_form_J3(p, N, ctx)
        checks.append(_check("J3_closed_form_relative", abs(j3 - pf3) / abs(pf3),
                             1e-20))
        for k, pf in ((1, asy.proof_form_J1(p, N, ctx)),
                      (2, asy.proof_form_J2(p, N, ctx))):
            jk = jsc * pieces[k].value
            results.append(_result(f"J_{k}N_minus_leading_form", jk - pf,
                                   "closed-form", dps))
        v = asy.vanishing_sum(p, N, ctx)
        checks.append(_check("vanishing_sum_abs", abs(v), 1e-25))
    report.update(results=results, checks=checks)
    return report, timing


def cmd_compare(args) -> tuple:
    ctx = _ctx(args)
    p = new_cable_params(args.a, args.b)
    ns = args.N_list
    dps = int(ctx.bits * 0.3) + 2
    report = {"command": "compare",
              "params": {"a": args.a, "b": args.b, "N_list": ns,
                         "prec_bits": ctx.bits}}
    results, checks, timing = [], [], {}
    rows = []
    t0 = time.time()
    for n in ns:
        with ctx.workprec(64):
            jn, res = qd.exact_jones_result(p, n, ctx)
            thm = asy.theorem_rhs(p, n, ctx)
            lead = asy.jform_leading(p, n, ctx)
            lead_printed = asy.jform_leading(p, n, ctx, variant="printed")
            cand = {
                "expansion_as_printed": thm,
                "expansion_corrected": asy.framing_phase(p, n, "derived") * lead,
                "expansion_printed_with_phase": (asy.framing_phase(p, n, "printed")
                                                 * lead_printed),
            }
            row = {"N": n, "J_N": jn, "route": res.method,
                   "residuals": {k: abs(jn - v) for k, v in cand.items()}}
        rows.append(row)
        results.append(_result(f"J_{n}", jn, "quadrature", dps))
        results.append(_result(f"rhs_plain_{n}", thm, "closed-form", dps))
        for k, v in row["residuals"].items():
            results.append({"label": f"residual_{k}_{n}",
                            "value": mp.nstr(v, 8), "method": "closed-form"})
    timing["total_s"] = round(time.time() - t0, 3)
    slopes = {}
    for key in rows[0]["residuals"]:
        slopes[key] = _loglog_slope(ns, [r["residuals"][key] for r in rows])
        results.append({"label": f"loglog_slope_{key}",
                        "value": f"{slopes[key]:.4f}", "method": "closed-form"})
    selected = min(slopes, key=lambda k: slopes[k])
    results.append({"label": "selected_form", "value": selected,
                    "method": "closed-form"})
    results.append({"label": "sign_question_finding", "value": (
        "the double-sum block sign printed in the final statement matches the "
        "residue-window assembly (no discrepancy there); the remainder bound "
        "holds only for the corrected closed form (selected), which keeps the "
        "normalization phase e^{i pi (3Q+3P-4/P)/(4N)} and drops the (-1)^N "
        "on the second block (that factor traces to an odd integer printed as "
        "even in the z1-saddle phase)"), "method": "closed-form"})
    checks.append(_check("selected_form_loglog_slope", slopes[selected], 0.7))
    r_over_n2 = [float(r["residuals"][selected]) / n ** 2 for r, n in zip(rows, ns)]
    mono = all(r_over_n2[i + 1] < r_over_n2[i] for i in range(len(ns) - 1))
    checks.append({"name": "residual_over_N2_decreasing",
                   "status": "pass" if mono else "fail",
                   "measured": json.dumps([f"{x:.3e}" for x in r_over_n2]),
                   "tolerance": "monotone decreasing"})
    report.update(results=results, checks=checks)
    report["plot_data"] = [[r["N"], float(r["residuals"][selected])] for r in rows]
    return report, timing


def cmd_reps(args) -> tuple:
    ctx = _ctx(args)
    p = new_cable_params(args.a, args.b)
    us = [mp.mpc(*u) for u in (args.u or [(0.0, 0.0), (0.3, 0.0), (0.1, 0.2)])]
    report = {"command": "reps",
              "params": {"a": args.a, "b": args.b,
                         "u": [[float(mp.re(u)), float(mp.im(u))] for u in us],
                         "prec_bits": ctx.bits}}
    results, checks, timing = [], [], {}
    tol = mp.mpf(10) ** (-int(ctx.bits * 0.19))
    t0 = time.time()
    worst = mp.mpf(0)
    degenerate = []
    families = ([("AN", (l,)) for l in range(2 * p.b + 1)]
                + [("NA", (m,)) for m in range(4 * p.a + 2)]
                + [("NN", (j, k)) for j in range(p.R)
                   for k in range(4 * p.a + 2)])
    for fam, idx in families:
        if ho.rep_degenerate(fam, p, idx):
            degenerate.append([fam, list(idx)])
            continue
        for u in us:
            rep = ho.make_rep(fam, p, idx, u, ctx)
            worst = max(worst, ho.relator_defect(rep, p, ctx))
    results.append({"label": "degenerate_indices_skipped", "value": degenerate,
                    "method": "closed-form"})
    checks.append(_check("worst_relator_defect", worst, tol))
    with ctx.workprec():
        u = us[-1] if us[-1] != 0 else mp.mpc("0.3", "0.1")
        for fam, idx in (("AN", (min(1, 2 * p.b),)), ("NA", (0,)), ("NN", (0, 0))):
            rep = ho.make_rep(fam, p, idx, u, ctx)
            lam_w = ho.word_eval(rep, ho.longitude(p))
            lam_c = ho.longitude_matrix_closed(fam, p, u)
            checks.append(_check(f"longitude_closed_form_{fam}",
                                 ho.mat_maxdiff(lam_w, lam_c), tol))
        rna = ho.rho_na(p, 0, u, ctx)
        dev = ho.mat_maxdiff(ho.word_eval(rna, ho.longitude(p)),
                             ho.mat_pow(rna.gen_images["p"], -8 * p.P))
        checks.append(_check("longitude_NA_p_power", dev, tol))
    sym = ho.symmetry_checks(p, ctx, us[-1])
    for name, v in sym.items():
        if name == "an_reflect_printed_R":
            results.append({"label": name, "value": mp.nstr(v, 6),
                            "method": "closed-form"})
        else:
            checks.append(_check(f"symmetry_{name}", v, tol))
    ab = ho.abelianization(p)
    results.append({"label": "abelianization_classmap", "value": ab["classmap"],
                    "method": "closed-form"})
    lam_cls = ho.word_class(ho.longitude(p), ab["classmap"])
    checks.append({"name": "longitude_nullhomologous",
                   "status": "pass" if lam_cls == 0 else "fail",
                   "measured": str(lam_cls), "tolerance": "0 exactly"})
    timing["total_s"] = round(time.time() - t0, 3)
    report.update(results=results, checks=checks)
    return report, timing


def cmd_cs_torsion(args) -> tuple:
    ctx = _ctx(args)
    p = new_cable_params(args.a, args.b)
    report = {"command": "cs-torsion",
              "params": {"a": args.a, "b": args.b, "prec_bits": ctx.bits}}
    results, checks, timing = [], [], {}
    t0 = time.time()
    worst = mp.mpf(0)
    with ctx.workprec():
        entries = ([("AN", (l,)) for l in range(2 * p.b + 1)]
                   + [("NA", (m,)) for m in range(4 * p.a + 2)]
                   + [("NN", (j, k)) for j, k in asy.index_set_B(p).pairs])
        degenerate = []
        for fam, idx in entries:
            cs = ho.cs_value(fam, p, idx)
            row = {"family": fam, "indices": list(idx),
                   "cs_over_pi2": str(cs.coeff), "cs_linear": cs.linear_term_note}
            if ho.torsion_degenerate(fam, p, idx):
                degenerate.append([fam, list(idx)])
                row["torsion"] = "degenerate (tau = 0, printed denominator = 0)"
            else:
                tv = ho.torsion_value(fam, p, idx, ctx)
                if fam == "AN":
                    tau, _ = asy.tau_S_an(p, idx[0], ctx)
                elif fam == "NA":
                    tau, _ = asy.tau_S_na(p, idx[0], ctx)
                else:
                    tau, _ = asy.tau_S_nn(p, idx[0], idx[1], ctx)
                prod = tau ** 2 * tv.value
                worst = max(worst, abs(prod - 1))
                row["torsion"] = mp.nstr(tv.value, 20)
                row["tau_sq_times_torsion_minus_1"] = mp.nstr(abs(prod - 1), 4)
            results.append({"label": f"{fam}{tuple(idx)}", "value": row,
                            "method": "closed-form"})
    checks.append(_check("tau_torsion_duality_worst", worst, 1e-25))
    results.append({"label": "duality_degenerate_indices", "value": degenerate,
                    "method": "closed-form"})
    timing["total_s"] = round(time.time() - t0, 3)
    report.update(results=results, checks=checks)
    return report, timing


def cmd_dk(args) -> tuple:
    ctx = _ctx(args)
    c, d_ = args.c, args.d
    ns = args.N_list
    dps = int(ctx.bits * 0.3) + 2
    report = {"command": "dk",
              "params": {"c": c, "d": d_, "N_list": ns, "prec_bits": ctx.bits}}
    results, checks, timing = [], [], {}
    t0 = time.time()
    resids = []
    phis = []
    for n in ns:
        q = exp_pi_i(Fraction(2, n))
        j = skein.torus_jones(c, d_, n, q, ctx)
        rhs = asy.dk_rhs(c, d_, n, ctx)
        resid = abs(j - rhs)
        resids.append(resid)
        with ctx.workprec():
            phis.append(n * (j - rhs) / (mp.pi * mp.mpc(0, 1) * rhs))
        results.append(_result(f"J_{n}", j, "skein", dps))
        results.append(_result(f"rhs_{n}", rhs, "closed-form", dps))
        results.append({"label": f"residual_{n}", "value": mp.nstr(resid, 8),
                        "method": "closed-form"})
    slope = _loglog_slope(ns, resids)
    results.append({"label": "residual_loglog_slope", "value": f"{slope:.4f}",
                    "method": "closed-form"})
    phi_fit = sum(mp.re(x) for x in phis) / len(phis)
    results.append({"label": "fitted_phase_coefficient", "value": mp.nstr(phi_fit, 6),
                    "method": "closed-form"})
    with ctx.workprec():
        resids2 = []
        for n, row_n in zip(ns, range(len(ns))):
            q = exp_pi_i(Fraction(2, n))
            j = skein.torus_jones(c, d_, n, q, ctx)
            rhs = asy.dk_rhs(c, d_, n, ctx)
            corr = mp.exp(mp.pi * mp.mpc(0, 1) * phi_fit / n)
            resids2.append(abs(j - corr * rhs))
    slope2 = _loglog_slope(ns, resids2)
    results.append({"label": "phase_corrected_loglog_slope",
                    "value": f"{slope2:.4f}", "method": "closed-form"})
    checks.append({"name": "literal_residual_bounded",
                   "status": "pass" if slope <= 0.25 else "fail",
                   "measured": f"slope {slope:.4f}",
                   "tolerance": "slope <= 0.25 (no growth trend)"})
    checks.append({"name": "phase_corrected_residual_bounded",
                   "status": "pass" if slope2 <= 0.25 else "fail",
                   "measured": f"slope {slope2:.4f}",
                   "tolerance": "slope <= 0.25"})
    # exact mod-pi^2 agreement of the two printed actions
    bad = 0
    for k in range(1, c * d_):
        diff = asy.dk_S_coeff(c, d_, k) - asy.dk_S_tilde_coeff(c, d_, k)
        if diff.denominator != 1:
            bad += 1
    checks.append({"name": "action_mod_pi2_integrality",
                   "status": "pass" if bad == 0 else "fail",
                   "measured": f"{bad} non-integers", "tolerance": "0"})
    with ctx.workprec():
        n0 = ns[0]
        ratio = asy.dk_remark_rhs(c, d_, n0, ctx) / asy.dk_rhs(c, d_, n0, ctx)
        results.append(_result("remark_form_over_main_form", ratio,
                               "closed-form", 10))
    timing["total_s"] = round(time.time() - t0, 3)
    report.update(results=results, checks=checks)
    return report, timing


def cmd_plot_data(args) -> tuple:
    report, timing = cmd_compare(args)
    rows = report.pop("plot_data")
    out = {"command": "plot-data", "params": report["params"],
           "results": [{"label": "columns", "value": "N residual",
                        "method": "closed-form"},
                       {"label": "rows", "value": rows, "method": "closed-form"}],
           "checks": []}
    return out, timing


def _write_csv(path, report):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["label", "value", "method"])
        for r in report.get("results", []):
            v = r["value"]
            if isinstance(v, dict) and set(v) == {"re", "im"}:
                v = f"{v['re']}+{v['im']}j"
            w.writerow([r["label"], v, r.get("method", "")])
        w.writerow([])
        w.writerow(["check", "status", "measured", "tolerance"])
        for c in report.get("checks", []):
            w.writerow([c["name"], c["status"], c["measured"], c["tolerance"]])


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def _u_pair(text):
    parts = text.split(",")
    return (float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kashaev",
                                 description="Cable-knot quantum invariant "
                                             "verification commands")
    ap.add_argument("--csv", help="also write results to this CSV path")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--prec", type=int, default=None,
                        help="precision bits (default: env KASHAEV_PREC_BITS or 128)")
        sp.add_argument("--csv", help="also write results to this CSV path")

    sp = sub.add_parser("exact", help="J_N by quadrature and/or the braid oracle")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--method", choices=["quadrature", "skein", "both"],
                    default="both")
    common(sp)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("decompose", help="contour-shift pieces and identities")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("compare", help="invariant versus closed-form expansions")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--N-list", type=_int_list, default=[25, 51, 101, 201])
    common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("plot-data", help="(N, residual) columns only")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--N-list", type=_int_list, default=[25, 51, 101, 201])
    common(sp)
    sp.set_defaults(func=cmd_plot_data)

    sp = sub.add_parser("reps", help="representation relator/symmetry checks")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--u", type=_u_pair, action="append",
                    help="deformation parameter re,im (repeatable)")
    common(sp)
    sp.set_defaults(func=cmd_reps)

    sp = sub.add_parser("cs-torsion", help="invariant values and torsion duality")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_cs_torsion)

    sp = sub.add_parser("dk", help="torus-knot expansion convergence table")
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--N-list", type=_int_list, default=[25, 51, 101])
    common(sp)
    sp.set_defaults(func=cmd_dk)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        report, timing = args.func(args)
    except KashaevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report["timing"] = timing
    json.dump(report, sys.stdout, indent=2, default=str)
    print()
    if args.csv:
        _write_csv(args.csv, report)
    if any(c["status"] == "fail" for c in report.get("checks", [])):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

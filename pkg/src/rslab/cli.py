"""Command-line front door: one subcommand per experiment.

Every run writes its artifacts into --out together with one appended
manifest line (parameters, tool version, wall clock, input cache digests);
each artifact opens with the manifest id it belongs to.  Exit codes:
0 success, 1 usage error (message on stderr), 2 validation failure (an
instance failing its functional-equation check, residuals over contract,
poisoned family bookkeeping).

Precision and range flags are global (--bits, --coeff-bound) and may also
be given after the subcommand; the cache directory comes from
RSLAB_CACHE_DIR.  --jobs is recorded in the manifest; sweeps reduce in
fixed index order regardless of its value, so outputs never depend on it.
"""

import argparse
import math
import os
import sys
import time
from dataclasses import asdict

from . import cache, lseries, zerolab
from .analytic import (DistinguishConfig, MomentConfig, distinguish, l1_sweep,
                       large_sieve_experiment, moment_integrals,
                       prime_power_sum, rn_main, rn_sum, sato_tate)
from .eigenforms import DEFAULT_PREC, dim_cusp_forms, eigenforms, miller_basis
from .lseries import VonMangoldtSource
from .mollifier import SieveConfig, verify_inverse
from .reports import append_manifest, new_manifest, write_csv, write_curve, \
    write_records
from .zerolab import (build_instance, count_zeros_box, convexity_probe,
                      fe_residual, required_coeff_bound)


class _UsageError(Exception):
    def __init__(self, usage, message):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(self.format_usage(), message)


def _int_list(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text: str) -> list:
    return [float(v) for v in text.split(",") if v.strip()]


def _complex_list(text: str) -> list:
    return [complex(v) for v in text.split(",") if v.strip()]


def _forms(ns, k: int, need: int = 0):
    bound = ns.coeff_bound or max(10**4, need)
    prec = ns.bits or DEFAULT_PREC
    return eigenforms(k, coeff_bound=max(bound, need), prec=prec)


def _pick(forms, idx: int, k: int):
    if not 0 <= idx < len(forms):
        raise ValueError("form index %d outside H_%d (dimension %d)"
                         % (idx, k, len(forms)))
    return forms[idx]


def _params(ns) -> dict:
    skip = {"handler", "out"}
    return {key: val for key, val in sorted(vars(ns).items())
            if key not in skip}


def _finish(ns, weights, t0, artifacts):
    man = new_manifest(ns.handler.__name__.lstrip("_"), _params(ns),
                       time.time() - t0, weights=weights)
    paths = [fn(man) for fn in artifacts]
    paths.append(append_manifest(ns.out, man))
    for p in paths:
        print("wrote %s" % p)
    return man


_TARGET_KINDS = {"zeta": "zeta", "sym2": "sym2", "rankin": "rankin",
                 "diag": "rankin"}


def _target_source(ns, t_max: float):
    """Build (source, forms, weights) for a zeros/probe style target."""
    target = ns.target
    if target not in _TARGET_KINDS:
        raise ValueError("unknown target %r" % target)
    if target == "zeta":
        return lseries.zeta_coeffs(), [], []
    kind = _TARGET_KINDS[target]
    need = required_coeff_bound(kind, ns.k, t_max)
    if target == "diag":
        need = max(need, required_coeff_bound("sym2", ns.k, 10.0))
    forms = _forms(ns, ns.k, need)
    if not forms:
        raise ValueError("weight %d has no cusp forms" % ns.k)
    if target == "sym2":
        return lseries.sym2(_pick(forms, ns.i, ns.k)), forms, [ns.k]
    if target == "diag":
        j = ns.i
    else:
        j = ns.j if ns.j is not None else ns.i + 1
    return (lseries.rankin(_pick(forms, ns.i, ns.k), _pick(forms, j, ns.k)),
            forms, [ns.k])


def _validated_instance(ns, t_max: float):
    source, _forms_, weights = _target_source(ns, t_max)
    inst = build_instance(source, gamma_convention=ns.gamma_convention,
                          t_max=t_max)
    fe_residual(inst)
    if inst.status != "VALIDATED":
        raise RuntimeError(
            "instance %s failed functional-equation validation "
            "(residual %.3e)" % (inst.label, inst.max_residual))
    return inst, weights


# ---------------------------------------------------------------------------
# subcommand handlers; each returns the process exit code


def _basis(ns):
    t0 = time.time()
    d = dim_cusp_forms(ns.k)
    n = ns.n or max(10, d)
    rows = []
    for idx, series in enumerate(miller_basis(ns.k, n)):
        for m in range(1, n + 1):
            rows.append((idx, m, series.coeff(m)))
    _finish(ns, [], t0, [
        lambda man: write_csv(ns.out, "basis_k%d.csv" % ns.k, man,
                              ("row", "n", "a_n"), rows)])
    print("weight %d: dim %d, %d coefficients per row" % (ns.k, d, n))
    return 0


def _eigenforms(ns):
    t0 = time.time()
    forms = _forms(ns, ns.k, ns.n or 0)
    limit = (ns.n or min(f.coeff_bound for f in forms)) if forms else 0
    header = ["n"] + ["lambda_%d" % f.index for f in forms]
    rows = []
    for m in range(1, limit + 1):
        rows.append([m] + [cache.mpf_to_str(f.lambda_(m), f.prec)
                           for f in forms])
    cached = cache.save_forms(ns.k, forms)
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, "eigenforms_k%d.csv" % ns.k, man,
                              header, rows)])
    print("cache %s" % cached)
    print("weight %d: %d forms, lambda(n) for n <= %d" %
          (ns.k, len(forms), limit))
    return 0


def _coeffs(ns):
    t0 = time.time()
    weights = []
    if ns.kind == "zeta":
        source = lseries.zeta_coeffs()
    else:
        forms = _forms(ns, ns.k, ns.n)
        weights = [ns.k]
        if ns.kind == "sym2":
            source = lseries.sym2(_pick(forms, ns.i, ns.k))
        elif ns.kind == "rankin":
            source = lseries.rankin(_pick(forms, ns.i, ns.k),
                                    _pick(forms, ns.j, ns.k))
        elif ns.kind == "sym2pair":
            source = lseries.sym2_pair(_pick(forms, ns.i, ns.k),
                                       _pick(forms, ns.j, ns.k))
        else:
            raise ValueError("unknown coefficient kind %r" % ns.kind)
    table = source.coeff_table(ns.n)
    rows = [(m, str(table[m])) for m in range(1, ns.n + 1)]
    _finish(ns, weights, t0, [
        lambda man: write_csv(ns.out, "coeffs_%s.csv" % source.describe(),
                              man, ("n", "a_n"), rows)])
    print("%s: %d coefficients (degree %d)" %
          (source.describe(), ns.n, source.degree))
    return 0


def _mollifier_check(ns):
    t0 = time.time()
    forms = _forms(ns, ns.k)
    records, worst = [], 0.0
    for i in range(len(forms)):
        for j in range(i, len(forms)):
            src = lseries.rankin(forms[i], forms[j])
            for s in ns.s_list:
                s_val = s.real if s.imag == 0 else s
                for z in ns.z_list:
                    chk = verify_inverse(forms[i], forms[j], s_val,
                                         SieveConfig(z), ns.l_max, source=src)
                    resid = abs(float(chk.residual))
                    worst = max(worst, resid)
                    records.append({
                        "pair": "(%d,%d)" % (i, j), "s": str(s), "z": z,
                        "residual": str(chk.residual),
                        "window": list(chk.window),
                        "g_cutoff": chk.g_cutoff})
    _finish(ns, [ns.k], t0, [
        lambda man: write_records(ns.out, "mollifier_check_k%d.jsonl" % ns.k,
                                  man, records)])
    print("worst |residual| %.3e over %d checks (tolerance %.0e)" %
          (worst, len(records), ns.tolerance))
    if worst > ns.tolerance:
        print("validation failure: inverse residual above tolerance",
              file=sys.stderr)
        return 2
    return 0


def _rn(ns):
    t0 = time.time()
    forms = _forms(ns, ns.k, int(max(ns.x_list) ** 2) + 1)
    j = ns.j if ns.j is not None else ns.i
    src = VonMangoldtSource(lseries.rankin(_pick(forms, ns.i, ns.k),
                                           _pick(forms, j, ns.k)))
    rows, curve = [], []
    for x in ns.x_list:
        val = float(rn_sum(src, x))
        main = rn_main(x)
        ratio = val / main if main else math.nan
        rows.append((x, val, main, ratio))
        curve.append((x, ratio))
    stem = "rn_k%d_%dx%d" % (ns.k, ns.i, j)
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, stem + ".csv", man,
                              ("x", "rn_sum", "rn_main", "ratio"), rows),
        lambda man: write_curve(ns.out, stem + ".dat", man, curve)])
    print("rn ratio at x=%g: %.6f" % (rows[-1][0], rows[-1][3]))
    return 0


def _distinguish(ns):
    t0 = time.time()
    forms = _forms(ns, ns.k)
    if len(forms) < 2:
        raise ValueError("weight %d has fewer than two eigenforms" % ns.k)
    cfg = DistinguishConfig(prec=ns.bits) if ns.bits else DistinguishConfig()
    rep = distinguish(forms[0], forms[1], cfg)
    record = {"k": ns.k, "p_star": rep.p_star, "gap": rep.gap,
              "tolerance": rep.tolerance, "certified": rep.certified,
              "discriminant": rep.discriminant, "charpoly": rep.charpoly,
              "searched_up_to": rep.searched_up_to, "note": rep.note}
    _finish(ns, [ns.k], t0, [
        lambda man: write_records(ns.out, "distinguish_k%d.jsonl" % ns.k,
                                  man, [record]),
        lambda man: write_curve(ns.out, "rn1_k%d.dat" % ns.k, man,
                                [(r[0], r[2]) for r in rep.rn1_curve]),
        lambda man: write_curve(ns.out, "rn2_k%d.dat" % ns.k, man,
                                [(r[0], r[2]) for r in rep.rn2_curve])])
    print("p_star = %s  certified = %s  (%s)" %
          (rep.p_star, rep.certified, rep.note))
    return 0


def _primes(ns):
    t0 = time.time()
    forms = _forms(ns, ns.k, int(ns.x))
    if ns.which == "square":
        sel = [_pick(forms, ns.index, ns.k)] * 2
    elif ns.which == "quartic":
        sel = [_pick(forms, ns.index, ns.k)] * 4
    elif ns.which == "cross":
        if len(forms) < 2:
            raise ValueError("cross product needs two eigenforms")
        sel = [forms[0], forms[1]]
    else:
        raise ValueError("unknown prime sum %r" % ns.which)
    rep = prime_power_sum(sel, ns.x)
    row = (ns.which, rep.x, rep.n_forms, rep.value, rep.pi_x,
           rep.ratio_pi, rep.ratio_2pi)
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, "primes_k%d_%s.csv" % (ns.k, ns.which),
                              man, ("which", "x", "n_forms", "value", "pi_x",
                                    "ratio_pi", "ratio_2pi"), [row])])
    print("%s sum at x=%g: value %.6f, /pi(x) %.6f, /2pi(x) %.6f" %
          (ns.which, rep.x, rep.value, rep.ratio_pi, rep.ratio_2pi))
    return 0


def _sato_tate(ns):
    t0 = time.time()
    forms = _forms(ns, ns.k, int(ns.x))
    rep = sato_tate(_pick(forms, ns.index, ns.k), ns.x, n_bins=ns.bins)
    rows = [(lo, hi, float(mass), str(mass)) for lo, hi, mass in rep.bins]
    curve = [((lo + hi) / 2, float(mass)) for lo, hi, mass in rep.bins]
    stem = "sato_tate_k%d_%d" % (ns.k, ns.index)
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, stem + ".csv", man,
                              ("theta_lo", "theta_hi", "mass", "mass_exact"),
                              rows),
        lambda man: write_curve(ns.out, stem + ".dat", man, curve),
        lambda man: write_records(ns.out, stem + ".jsonl", man, [{
            "k": ns.k, "index": ns.index, "x": rep.x, "ks": rep.ks,
            "n_primes": rep.n_primes, "zero_fraction": rep.zero_fraction}])])
    print("KS distance %.6f over %d primes" % (rep.ks, rep.n_primes))
    return 0


def _l1(ns):
    t0 = time.time()
    rep = l1_sweep(tuple(ns.k_list))
    rows = [(r.label, r.k, r.kind, r.value, r.v_short, r.v_long, r.stability,
             r.converged, r.positive, r.ratio) for r in rep.rows]
    _finish(ns, ns.k_list, t0, [
        lambda man: write_csv(ns.out, "l1_values.csv", man,
                              ("label", "k", "kind", "value", "v_short",
                               "v_long", "stability", "converged", "positive",
                               "ratio"), rows),
        lambda man: write_records(ns.out, "l1_summary.jsonl", man, [{
            "k_list": ns.k_list, "sup_sym2_ratio": rep.sup_sym2_ratio,
            "sup_pair_ratio": rep.sup_pair_ratio,
            "all_positive": rep.all_positive,
            "all_converged": rep.all_converged}])])
    print("sup sym2 ratio %.6f, sup pair ratio %.6f, converged=%s" %
          (rep.sup_sym2_ratio, rep.sup_pair_ratio, rep.all_converged))
    return 0


def _sieve(ns):
    t0 = time.time()
    rep = large_sieve_experiment(ns.k, ns.length,
                                 vector_family=ns.vector_family,
                                 trials=ns.trials, seed=ns.seed,
                                 block=ns.block)
    mat_rows = []
    for i, p1 in enumerate(rep.pair_labels):
        for j, p2 in enumerate(rep.pair_labels):
            mat_rows.append((str(p1), str(p2), rep.matrix[i][j],
                             rep.main_mask[i][j]))
    trial_rows = [(t, lhs, rep.rhs_shape, ratio) for t, (lhs, ratio)
                  in enumerate(zip(rep.trial_lhs, rep.trial_ratios))]
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, "sieve_matrix_k%d.csv" % ns.k, man,
                              ("pair_1", "pair_2", "smoothed_sum", "main"),
                              mat_rows),
        lambda man: write_csv(ns.out, "sieve_trials_k%d.csv" % ns.k, man,
                              ("trial", "lhs", "rhs_shape", "ratio"),
                              trial_rows),
        lambda man: write_records(ns.out, "sieve_summary_k%d.jsonl" % ns.k,
                                  man, [{
            "k": ns.k, "L": rep.L, "vector_family": rep.vector_family,
            "seed": rep.seed, "block": rep.block, "lhs_unit": rep.lhs_unit,
            "diagonal_ratio": rep.diagonal_ratio,
            "offdiag_ratio": rep.offdiag_ratio,
            "reported_ratio": rep.reported_ratio,
            "ratio_spread": rep.ratio_spread}])])
    print("diagonal %.5f, off-diagonal %.5f, reported ratio %.3e, "
          "spread %.3f" % (rep.diagonal_ratio, rep.offdiag_ratio,
                           rep.reported_ratio, rep.ratio_spread))
    return 0


def _moments(ns):
    t0 = time.time()
    cfg = MomentConfig(x=ns.x, z=ns.z, alpha=ns.alpha,
                       include_second=not ns.first_only)
    need = int(math.ceil(4.3 * cfg.smooth_width)) + 8
    if cfg.include_second:
        t_band = max(2 * ns.t + 0.5, 6.0)
        need = max(need, required_coeff_bound("rankin", ns.k, t_band))
    forms = _forms(ns, ns.k, need)
    if len(forms) < 2:
        raise ValueError("weight %d has fewer than two eigenforms" % ns.k)
    rep = moment_integrals(forms[0], forms[1], cfg, T=ns.t)
    _finish(ns, [ns.k], t0, [
        lambda man: write_records(ns.out, "moments_k%d.jsonl" % ns.k, man,
                                  [asdict(rep)])])
    print("I = %.6e (converged=%s), II = %s, combination = %s" %
          (rep.first, rep.first_converged,
           "%.6e" % rep.second if rep.second is not None else "skipped",
           "%.6e" % rep.combination if rep.combination is not None else "-"))
    return 0


def _zeros(ns):
    t0 = time.time()
    inst, weights = _validated_instance(ns, t_max=max(ns.t, 6.0))
    rep = count_zeros_box(inst, ns.alpha, ns.t)
    record = {"label": inst.label, "alpha": rep.alpha, "T": rep.T,
              "count": rep.count, "contour_residual": rep.contour_residual,
              "accepted": rep.accepted, "alpha_used": rep.alpha_used,
              "retries": rep.retries, "epsilon": str(inst.epsilon),
              "fe_residual": inst.max_residual,
              "gamma_convention": ns.gamma_convention}
    _finish(ns, weights, t0, [
        lambda man: write_records(ns.out, "zeros_%s.jsonl" % ns.target, man,
                                  [record])])
    print("count = %d in Re s >= %g, 0 <= t <= %g (%s, residual %.2e)" %
          (rep.count, rep.alpha, rep.T, inst.label, rep.contour_residual))
    if not rep.accepted:
        print("validation failure: contour residual above tolerance",
              file=sys.stderr)
        return 2
    return 0


def _density(ns):
    t0 = time.time()
    rep = zerolab.family_density(ns.k, ns.alpha, ns.t, mode=ns.mode,
                                 box_width=ns.box)
    rows = [(i, j, boxes, count) for i, j, boxes, count in rep.per_pair]
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, "density_k%d.csv" % ns.k, man,
                              ("index_1", "index_2", "boxes", "count"), rows),
        lambda man: write_records(ns.out, "density_k%d.jsonl" % ns.k, man, [{
            "k": rep.k, "alpha": rep.alpha, "T": rep.T, "mode": rep.mode,
            "box_width": rep.box_width, "aggregate": rep.aggregate,
            "comparison": rep.comparison, "ratio": rep.ratio,
            "poisoned": rep.poisoned}])])
    print("aggregate %d over %d pairs; aggregate/shape ratio %s" %
          (rep.aggregate, len(rep.per_pair), rep.ratio))
    if rep.poisoned:
        print("validation failure: a pair failed instance validation",
              file=sys.stderr)
        return 2
    return 0


def _classify(ns):
    t0 = time.time()
    rep = zerolab.classify_eta(ns.k, ns.eta, height=ns.t)
    rows = [(label, count, accepted) for label, count, accepted
            in rep.reports]
    _finish(ns, [ns.k], t0, [
        lambda man: write_csv(ns.out, "classify_k%d.csv" % ns.k, man,
                              ("label", "count", "accepted"), rows),
        lambda man: write_records(ns.out, "classify_k%d.jsonl" % ns.k, man, [{
            "k": rep.k, "eta": rep.eta, "height": rep.height,
            "h_minus": sorted(rep.h_minus), "d_minus": sorted(rep.d_minus),
            "h_ratio": rep.h_ratio, "d_ratio": rep.d_ratio}])])
    print("H_k^-(eta): %s   D_k^-(eta): %s" %
          (sorted(rep.h_minus) or "{}", sorted(rep.d_minus) or "{}"))
    if any(not accepted for _, _, accepted in rep.reports):
        print("validation failure: a member count was not accepted",
              file=sys.stderr)
        return 2
    return 0


def _probe(ns):
    t0 = time.time()
    inst, weights = _validated_instance(ns, t_max=max(max(ns.t_list) + 0.5,
                                                      6.0))
    rows = convexity_probe(inst, ns.t_list, epsilon=ns.eps)
    stem = "probe_%s" % ns.target
    _finish(ns, weights, t0, [
        lambda man: write_csv(ns.out, stem + ".csv", man,
                              ("t", "abs_l", "shape", "ratio"),
                              [(r["t"], r["abs_l"], r["shape"], r["ratio"])
                               for r in rows]),
        lambda man: write_curve(ns.out, stem + ".dat", man,
                                [(r["t"], r["ratio"]) for r in rows])])
    print("max ratio %.6e at t grid of %d points" %
          (max(r["ratio"] for r in rows), len(rows)))
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> _Parser:
    shared = _Parser(add_help=False)
    shared.add_argument("--bits", type=int, default=argparse.SUPPRESS,
                        help="working precision in bits")
    shared.add_argument("--coeff-bound", type=int, default=argparse.SUPPRESS,
                        help="coefficient table length override")
    shared.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="parallel map width for family sweeps "
                             "(recorded; reductions are order-fixed)")
    shared.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory for artifacts")

    parser = _Parser(prog="rslab", parents=[shared],
                     description=__doc__.splitlines()[0])
    parser.set_defaults(bits=None, coeff_bound=None,
                        jobs=os.cpu_count() or 1, out="rslab-out")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    def cmd(name, handler, schema, **kwargs):
        p = sub.add_parser(name, parents=[shared],
                           epilog="CSV schema: " + schema, **kwargs)
        p.set_defaults(handler=handler)
        return p

    p = cmd("basis", _basis, "row,n,a_n (echelon basis, a_{g_i}(j)=delta_ij)",
            help="integral echelon basis of the weight-k cusp space")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None,
                   help="coefficients per basis row")

    p = cmd("eigenforms", _eigenforms,
            "n,lambda_0,...,lambda_{d-1} (decimal strings at stored bits)",
            help="build/cache eigenforms; emit lambda(n) table")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="table length")

    p = cmd("coeffs", _coeffs, "n,a_n (Dirichlet coefficients)",
            help="tensor-product Dirichlet coefficient table")
    p.add_argument("--kind", required=True,
                   choices=("rankin", "sym2", "sym2pair", "zeta"))
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--n", type=int, default=100)

    p = cmd("mollifier-check", _mollifier_check,
            "records: pair,s,z,residual,window,g_cutoff",
            help="verify the mollifier inverts L on a prime window")
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--s-list", type=_complex_list, default=[2, 3, 2 + 10j])
    p.add_argument("--z-list", type=_float_list, default=[17.0, 20.0, 50.0])
    p.add_argument("--l-max", type=int, default=10**3)
    p.add_argument("--tolerance", type=float, default=1e-25)

    p = cmd("rn", _rn, "x,rn_sum,rn_main,ratio",
            help="explicit-formula prime-power sum against 4(x-2+1/x)")
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=None,
                   help="second index; defaults to --i (diagonal)")
    p.add_argument("--x-list", type=_float_list,
                   default=[float(x) for x in range(10, 101, 10)])

    p = cmd("distinguish", _distinguish,
            "records: p_star,gap,tolerance,certified,discriminant,charpoly",
            help="first prime separating the two eigenvalue systems")
    p.add_argument("--k", type=int, required=True)

    p = cmd("primes", _primes,
            "which,x,n_forms,value,pi_x,ratio_pi,ratio_2pi",
            help="prime sums of lambda products against pi(x)")
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--x", type=float, default=10**5)
    p.add_argument("--which", choices=("square", "quartic", "cross"),
                   default="square")
    p.add_argument("--index", type=int, default=0)

    p = cmd("sato-tate", _sato_tate,
            "theta_lo,theta_hi,mass,mass_exact (exact masses sum to 1)",
            help="Satake angle histogram against (2/pi)sin^2")
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--x", type=float, default=10**5)
    p.add_argument("--bins", type=int, default=50)

    p = cmd("l1", _l1,
            "label,k,kind,value,v_short,v_long,stability,converged,"
            "positive,ratio",
            help="edge values L(1) for sym2 and distinct sym2 pairs")
    p.add_argument("--k-list", type=_int_list, default=[12, 24])

    p = cmd("sieve", _sieve,
            "matrix: pair_1,pair_2,smoothed_sum,main; "
            "trials: trial,lhs,rhs_shape,ratio",
            help="family quadratic form against the sieve shape")
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--length", type=float, default=2000.0)
    p.add_argument("--vector-family", default="random signs")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--block", type=int, default=32)
    p.add_argument("--seed", type=int, default=20240801)

    p = cmd("moments", _moments,
            "records: first,second,errors,panels,combination,kappa,x,y",
            help="mollified moment integrals I and II")
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--x", type=float, default=100.0)
    p.add_argument("--z", type=float, default=20.0)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--t", type=float, default=2.0)
    p.add_argument("--first-only", action="store_true")

    p = cmd("zeros", _zeros,
            "records: label,alpha,T,count,contour_residual,accepted",
            help="argument-principle zero count in a box")
    p.add_argument("--target", required=True,
                   choices=("zeta", "sym2", "rankin", "diag"))
    p.add_argument("--k", type=int, default=12)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--alpha", type=float, default=0.6)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--gamma-convention", default="default")

    p = cmd("density", _density, "index_1,index_2,boxes,count",
            help="family zero-density aggregate with ratio columns")
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--t", type=float, default=5.0)
    p.add_argument("--box", type=float, default=None)
    p.add_argument("--mode", choices=("rankin", "sym2"), default="rankin")

    p = cmd("classify", _classify, "label,count,accepted",
            help="eta-classification of low-zero members")
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--eta", type=float, default=0.2)
    p.add_argument("--t", type=float, default=10.0)

    p = cmd("probe", _probe, "t,abs_l,shape,ratio",
            help="|L| along Re s = 1/2 + eps against the convexity shape")
    p.add_argument("--target", default="rankin",
                   choices=("zeta", "sym2", "rankin", "diag"))
    p.add_argument("--k", type=int, default=24)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--t-list", type=_float_list,
                   default=[0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--gamma-convention", default="default")
    return parser


def cache_roundtrip(k: int, directory=None) -> bool:
    """True iff the weight-k cache reloads to an identical serialization."""
    path = cache.cache_path(k, directory)
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError:
        return False
    forms = cache.load_forms(k, directory)
    if forms is None:
        return False
    body = "\n".join(cache._body_lines(k, forms)) + "\n"
    return text.split("\n", 2)[2] == body


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as err:
        sys.stderr.write(err.usage)
        print("error: %s" % err, file=sys.stderr)
        return 1
    if getattr(ns, "handler", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return ns.handler(ns)
    except (ValueError, RuntimeError) as err:
        print("validation failure: %s" % err, file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Thirteen-point acceptance gate over the whole pipeline.

Each test prints one verdict line (CRITERION nn: PASS/FAIL ...) before
asserting, so `pytest -s tests/test_acceptance.py` gives a compact
scoreboard.  Exact integer oracles and 2^-96 algebraic sweeps come first,
then the statistical windows and the zero-counting reports.  Family-wide
sweeps construct forms per weight and drop them to keep memory flat; the
single weights 12, 24, 28 are shared module fixtures.
"""

import math
import statistics
import sys

import mpmath
import pytest
from mpmath import mp, mpf

from rslab.analytic import (distinguish, large_sieve_experiment,
                            prime_power_sum, rn_main, rn_sum, sato_tate)
from rslab.eigenforms import dim_cusp_forms, eigenforms
from rslab.lseries import (TensorCoeffSource, VonMangoldtSource,
                           factorization_check_diagonal,
                           factorization_check_sym2tensor, rankin, sym2,
                           zeta_coeffs)
from rslab.mollifier import SieveConfig, verify_inverse
from rslab.primes import primes_up_to
from rslab.zerolab import (build_instance, classify_eta, count_zeros_box,
                           count_zeros_strip, family_density, fe_residual,
                           scan_line_zeros)

PREC = 192
REL96 = mpf(2) ** -96
WEIGHTS = [k for k in range(12, 61, 2) if dim_cusp_forms(k) > 0]


def _verdict(num, ok, detail):
    print("CRITERION %02d: %s  %s" % (num, "PASS" if ok else "FAIL", detail))
    sys.stdout.flush()
    assert ok, "criterion %02d failed: %s" % (num, detail)


def _log2(x):
    return math.log2(x) if x > 0 else float("-inf")


@pytest.fixture(scope="module")
def delta():
    return eigenforms(12, coeff_bound=10**5, prec=PREC)[0]


@pytest.fixture(scope="module")
def pair24():
    return eigenforms(24, coeff_bound=10**5, prec=PREC)


@pytest.fixture(scope="module")
def pair28():
    return eigenforms(28, coeff_bound=10**4, prec=PREC)


# -- 1: exact coefficients ---------------------------------------------------


def test_criterion_01_tau_exact(delta):
    n_max = 1000
    # q prod (1-q^n)^24 by brute force over Z: iterated sparse factors for
    # eta, then binary powering with convolutions truncated at degree 999
    # (the q shift makes tau(n) the coefficient of q^(n-1))
    eta = [0] * n_max
    eta[0] = 1
    for j in range(1, n_max):
        for i in range(n_max - 1, j - 1, -1):
            eta[i] -= eta[i - j]

    def mul(a, b):
        out = [0] * n_max
        for i, ai in enumerate(a):
            if ai:
                hi = n_max - i
                for j in range(hi):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
        return out

    e2 = mul(eta, eta)
    e4 = mul(e2, e2)
    e8 = mul(e4, e4)
    e16 = mul(e8, e8)
    e24 = mul(e16, e8)
    assert (e24[0], e24[1], e24[2]) == (1, -24, 252)

    bad = None
    with mp.workprec(PREC):
        for n in range(1, n_max + 1):
            c = delta.coefficient(n)
            ci = int(c)
            if c != ci or ci != e24[n - 1]:
                bad = n
                break
    _verdict(1, bad is None,
             "tau(n) integer-exact for n <= %d" % n_max if bad is None
             else "first mismatch at n = %d" % bad)


# -- 2: Hecke relations ------------------------------------------------------


def test_criterion_02_hecke_relations():
    n_max = 10**4
    spf = list(range(n_max + 1))
    for p in range(2, int(n_max**0.5) + 1):
        if spf[p] == p:
            for m in range(p * p, n_max + 1, p):
                if spf[m] == m:
                    spf[m] = p
    worst = mpf(0)
    n_forms = 0
    with mp.workprec(PREC + 32):
        for k in WEIGHTS:
            for f in eigenforms(k, coeff_bound=n_max, prec=160):
                n_forms += 1
                tab = f.lambda_table(n_max)
                # multiplicativity, split at the smallest prime factor
                for n in range(2, n_max + 1):
                    p = spf[n]
                    pe, m = p, n // p
                    while m % p == 0:
                        pe *= p
                        m //= p
                    if m == 1:
                        continue
                    rhs = tab[pe] * tab[m]
                    den = abs(rhs)
                    rel = abs(tab[n] - rhs) / (den if den > 1 else 1)
                    if rel > worst:
                        worst = rel
                # recursion at prime powers
                for p in primes_up_to(int(n_max**0.5)):
                    m = 1
                    while p ** (m + 1) <= n_max:
                        prev = tab[p ** (m - 1)] if m > 1 else mpf(1)
                        rhs = tab[p ** (m + 1)] + prev
                        den = abs(rhs)
                        rel = abs(tab[p] * tab[p**m] - rhs) / (den if den > 1 else 1)
                        if rel > worst:
                            worst = rel
                        m += 1
        ok = worst <= REL96
    _verdict(2, ok, "%d forms, k in [12, 60], arguments <= 1e4, "
             "worst rel err 2^%.1f" % (n_forms, _log2(worst)))


# -- 3: Deligne bound --------------------------------------------------------


def test_criterion_03_deligne_bound():
    ps = primes_up_to(10**5)
    worst = mpf(0)
    n_forms = 0
    for k in WEIGHTS:
        for f in eigenforms(k, coeff_bound=10**5, prec=160):
            n_forms += 1
            with mp.workprec(192):
                for p in ps:
                    a = abs(f.lambda_(p))
                    if a > worst:
                        worst = a
    ok = worst <= 2 + REL96
    _verdict(3, ok, "%d forms, %d primes <= 1e5, max |lambda(p)| = %.15f"
             % (n_forms, len(ps), float(worst)))


# -- 4: Euler-factor oracle --------------------------------------------------


def _satake_roots(kind, f, g, p, prec):
    with mp.workprec(prec):
        i = mpmath.mpc(0, 1)
        th = f.satake_angle(p)
        if kind == "sym2":
            return [mpmath.exp(2 * i * th), mpmath.mpc(1), mpmath.exp(-2 * i * th)]
        ph = g.satake_angle(p)
        if kind == "rankin":
            return [mpmath.exp(i * (s1 * th + s2 * ph))
                    for s1 in (1, -1) for s2 in (1, -1)]
        a = [mpmath.exp(2 * i * s * th) for s in (1, -1)] + [mpmath.mpc(1)]
        b = [mpmath.exp(2 * i * s * ph) for s in (1, -1)] + [mpmath.mpc(1)]
        return [x * y for x in a for y in b]


def _expand_from_roots(roots, m_max, prec):
    # symbolic route: multiply out prod (1 - r q), then invert the series
    with mp.workprec(prec):
        dpoly = [mpmath.mpc(1)]
        for r in roots:
            nxt = dpoly + [mpmath.mpc(0)]
            for i in range(len(dpoly)):
                nxt[i + 1] -= r * dpoly[i]
            dpoly = nxt
        c = [mpmath.mpc(1)]
        for m in range(1, m_max + 1):
            acc = mpmath.mpc(0)
            for i in range(1, min(m, len(dpoly) - 1) + 1):
                acc -= dpoly[i] * c[m - i]
            c.append(acc)
    return c


def test_criterion_04_euler_factor_oracle(pair24):
    f, g = pair24
    worst = mpf(0)
    with mp.workprec(PREC + 64):
        for kind, forms in (("rankin", (f, g)), ("sym2", (f,)),
                            ("sym2pair", (f, g))):
            src = TensorCoeffSource(kind, forms)
            for p in (2, 3, 5):
                got = src.local_coeffs(p, 5)
                oracle = _expand_from_roots(
                    _satake_roots(kind, f, g, p, PREC + 64), 5, PREC + 64)
                for m in range(1, 6):
                    assert abs(mpmath.im(oracle[m])) < REL96
                    err = abs(got[m - 1] - mpmath.re(oracle[m]))
                    if err > worst:
                        worst = err
        ok = worst <= REL96
    _verdict(4, ok, "rankin/sym2/degree-9 at p in {2,3,5}, m <= 5, "
             "worst err 2^%.1f" % _log2(worst))


# -- 5: convolution factorizations -------------------------------------------


def test_criterion_05_factorizations(delta, pair24):
    r_diag = factorization_check_diagonal(delta, 1000)
    f, g = pair24
    r_four = factorization_check_sym2tensor(f, g, 500)
    ok = r_diag <= mpf(2) ** -90 * 1000 and r_four <= mpf(2) ** -90 * 500
    _verdict(5, ok, "diagonal residual 2^%.1f (n <= 1000), four-factor "
             "residual 2^%.1f (n <= 500)" % (_log2(r_diag), _log2(r_four)))


# -- 6: inverse identity -----------------------------------------------------


def test_criterion_06_inverse_identity(pair24, pair28):
    s_points = (2, 3, mpmath.mpc(2, 10))
    worst = mpf(0)
    checks = 0
    for forms in (pair24, pair28):
        for i in range(len(forms)):
            for j in range(i, len(forms)):
                src = rankin(forms[i], forms[j])
                for s in s_points:
                    for z in (17, 20, 50):
                        chk = verify_inverse(forms[i], forms[j], s,
                                             SieveConfig(z), 10**3, source=src)
                        checks += 1
                        if chk.residual > worst:
                            worst = chk.residual
    ok = worst <= mpf(10) ** -25
    _verdict(6, ok, "%d pair/s/z combinations at k in {24, 28}, worst "
             "residual 10^%.1f" % (checks, math.log10(worst) if worst > 0
                                   else float("-inf")))


# -- 7: explicit-formula windows ---------------------------------------------


def test_criterion_07_explicit_formula(delta, pair24):
    src = VonMangoldtSource(rankin(delta, delta))
    ratio100 = rn_sum(src, 100.0) / rn_main(100.0)
    hi = statistics.fmean(abs(rn_sum(src, float(x)) / rn_main(float(x)) - 1)
                          for x in range(50, 101, 10))
    lo = statistics.fmean(abs(rn_sum(src, float(x)) / rn_main(float(x)) - 1)
                          for x in range(10, 21, 2))
    f, g = pair24
    cross = rn_sum(VonMangoldtSource(rankin(f, g)), 100.0) / rn_main(100.0)
    ok = 0.8 <= ratio100 <= 1.2 and hi < lo and abs(cross) <= 0.2
    _verdict(7, ok, "diagonal ratio %.4f at x=100, mean dev %.3f (x in "
             "[50,100]) vs %.3f (x in [10,20]), cross ratio %.4f"
             % (ratio100, hi, lo, cross))


# -- 8: distinguishing prime -------------------------------------------------


def test_criterion_08_distinguishing_prime(pair24, pair28):
    parts = []
    ok = True
    for k, pair in ((24, pair24), (28, pair28)):
        rep = distinguish(pair[0], pair[1])
        good = rep.p_star == 2 and rep.certified and rep.discriminant not in (0, None)
        ok = ok and good
        parts.append("k=%d p*=%s disc=%s" % (k, rep.p_star, rep.discriminant))
    _verdict(8, ok, "; ".join(parts))


# -- 9: prime sums -----------------------------------------------------------


def test_criterion_09_prime_sums(delta, pair24):
    quart = prime_power_sum([delta] * 4, 10**5)
    square = prime_power_sum([delta] * 2, 10**5)
    f, g = pair24
    cross = prime_power_sum([f, g], 10**5)
    ok = (0.85 <= quart.ratio_2pi <= 1.15 and 0.85 <= square.ratio_pi <= 1.15
          and -0.15 <= cross.ratio_pi <= 0.15)
    _verdict(9, ok, "lambda^4/(2 pi(x)) = %.4f, lambda^2/pi(x) = %.4f, "
             "cross mean %.4f" % (quart.ratio_2pi, square.ratio_pi,
                                  cross.ratio_pi))


# -- 10: Sato-Tate -----------------------------------------------------------


def test_criterion_10_sato_tate(delta):
    rep = sato_tate(delta, 10**5)
    ok = rep.ks <= 0.05
    _verdict(10, ok, "KS distance %.5f over %d primes" % (rep.ks, rep.n_primes))


# -- 11: large sieve ---------------------------------------------------------


def test_criterion_11_large_sieve():
    reps = {L: large_sieve_experiment(24, L) for L in (2000.0, 4000.0)}
    a, b = reps[2000.0], reps[4000.0]
    drift = abs(b.diagonal_ratio / a.diagonal_ratio - 1)
    dominated = all(
        v <= r.reported_ratio * r.rhs_shape * (1 + 1e-12)
        for r in (a, b) for v in r.trial_lhs)
    ok = (drift <= 0.2 and b.offdiag_ratio <= 0.25 * b.diagonal_ratio
          and dominated and a.ratio_spread <= 10 and b.ratio_spread <= 10)
    _verdict(11, ok, "diag %.4f -> %.4f (drift %.3f), offdiag/diag %.4f at "
             "L=4000, spreads %.2f / %.2f over %d trials"
             % (a.diagonal_ratio, b.diagonal_ratio, drift,
                b.offdiag_ratio / b.diagonal_ratio, a.ratio_spread,
                b.ratio_spread, b.trials))


# -- 12: zero counting -------------------------------------------------------


def test_criterion_12_zerolab(delta, pair24):
    insts = {
        "zeta": build_instance(zeta_coeffs(), t_max=30.0),
        "sym2": build_instance(sym2(delta), t_max=12.0),
        "rankin": build_instance(rankin(*pair24), t_max=8.0),
    }
    fe_ok = True
    worst_res, worst_eps = 0.0, 0.0
    for inst in insts.values():
        rep = fe_residual(inst)
        res = rep["max_residual"]
        eps_err = abs(rep["epsilon_fit"] - 1)
        worst_res = max(worst_res, res)
        worst_eps = max(worst_eps, float(eps_err))
        fe_ok = fe_ok and res <= 1e-10 and eps_err <= 1e-8

    strip = count_zeros_strip(insts["zeta"], 30.0)
    scan = scan_line_zeros(insts["zeta"], 0.0, 30.0)
    count_ok = strip.accepted and strip.count == 3 and len(scan) == 3

    box = count_zeros_box(insts["sym2"], 0.6, 10.0)
    box_ok = box.accepted and box.count == 0 and box.contour_residual <= 1e-3

    diag = build_instance(rankin(delta, delta), t_max=11.0)
    fe_residual(diag)
    z10 = count_zeros_strip(insts["zeta"], 10.0)
    s10 = count_zeros_strip(insts["sym2"], 10.0)
    d10 = count_zeros_strip(diag, 10.0)
    add_ok = (all(r.accepted for r in (z10, s10, d10))
              and d10.count == z10.count + s10.count)

    ok = fe_ok and count_ok and box_ok and add_ok
    _verdict(12, ok, "fe residual <= %.1e, |eps-1| <= %.1e; zeta [0,30] "
             "count %d/%d (contour/scan); N(0.6,10,Sym2) = %d (residual "
             "%.1e); additivity %d = %d + %d"
             % (worst_res, worst_eps, strip.count, len(scan), box.count,
                box.contour_residual, d10.count, z10.count, s10.count))


# -- 13: family reports ------------------------------------------------------


def test_criterion_13_family_reports():
    dens = family_density(24, 0.75, 5)
    per_pair_total = sum(row[3] for row in dens.per_pair)
    dens_ok = (dens.aggregate == per_pair_total and not dens.poisoned
               and dens.comparison > 0 and math.isfinite(dens.ratio))
    cls = classify_eta(24, 0.2, height=10)
    cls_ok = (cls.h_minus == frozenset() and cls.d_minus == frozenset()
              and math.isfinite(cls.h_ratio) and math.isfinite(cls.d_ratio))
    ok = dens_ok and cls_ok
    _verdict(13, ok, "density aggregate %d == per-pair sum %d (ratio %.3e); "
             "exceptional sets empty, ratio columns %.3e / %.3e"
             % (dens.aggregate, per_pair_total, dens.ratio, cls.h_ratio,
                cls.d_ratio))

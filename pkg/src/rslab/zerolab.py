"""Completed L-functions for the tensor sources: validated evaluators,
functional-equation residuals, and contour zero counts.

The evaluator is a single Mellin band quadrature

    Lambda(s) = int_0^inf x^{s-1} Phi(x) dx,   Phi(x) = sum_n a(n) K(n x),

with K the inverse Mellin transform of the gamma product.  Phi is sampled
once per instance on log-spaced Gauss-Legendre nodes; the kernel values
come from a trapezoid sum on a vertical line, swapped against truncated
Dirichlet partial sums so the cost is (contour nodes) x (coefficients)
instead of per-(n, x) kernel evaluations.  The functional equation is
never built in, which is what makes fe_residual a real check of the
gamma-shift configuration: a wrong shift shows up as a large residual,
not a silently absorbed convention.

Polar instances (zeta, diagonal f (x) f) subtract the x -> 0 asymptote
R1/x + R0 on (0, 1] and carry the poles R1/(s-1) + R0/s analytically,
with R0 = -R1 from the residue reflection of a self-dual completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import mpmath
import numpy
from mpmath import mp, mpc, mpf

from . import lseries
from .eigenforms import eigenforms

_LN2 = math.log(2)

# ---------------------------------------------------------------------------
# Gauss-Legendre rules at working precision


_GL_CACHE: dict = {}


def _gl_rule(n: int, prec: int):
    """Nodes and weights on [-1, 1], refined to prec bits from float seeds."""
    key = (n, prec)
    hit = _GL_CACHE.get(key)
    if hit is not None:
        return hit
    seeds, _ = numpy.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    with mp.workprec(prec + 32):
        tol = mpf(2) ** (-(prec + 16))
        for x0 in seeds:
            x = mpf(float(x0))
            for _ in range(60):
                p0, p1 = mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tol:
                    break
            p0, p1 = mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    _GL_CACHE[key] = (nodes, weights)
    return nodes, weights


# ---------------------------------------------------------------------------
# Archimedean data


def _arch_for(kind: str, k) -> tuple:
    """Gamma-factor shift list for a source kind, as (type, shift) pairs.

    Types: "R" is pi^{-s/2} Gamma(s/2) shifted, "C" is 2 (2pi)^{-s} Gamma(s)
    shifted.  An "R" contributes one archimedean parameter, a "C" two.
    """
    if kind == "zeta":
        return (("R", mpf(0)),)
    if kind == "standard":
        return (("C", mpf(k - 1) / 2),)
    if kind == "sym2":
        return (("R", mpf(1)), ("C", mpf(k - 1)))
    if kind == "rankin":
        return (("C", mpf(0)), ("C", mpf(k - 1)))
    raise ValueError(
        "unsupported source kind %r: no continuation implemented" % kind)


def _arch_params(source) -> tuple:
    k = source.forms[0].k if source.forms else None
    return _arch_for(source.kind, k)


def _gamma_eval(arch, s):
    """Product of the completed gamma factors at s (current precision)."""
    pi = mp.pi
    acc = mpc(1, 0)
    for typ, mu in arch:
        z = s + mu
        if typ == "R":
            acc *= pi ** (-z / 2) * mpmath.gamma(z / 2)
        else:
            acc *= 2 * (2 * pi) ** (-z) * mpmath.gamma(z)
    return acc


# ---------------------------------------------------------------------------
# Instance


class LFunctionInstance:
    """Band-quadrature evaluator for one completed L-function.

    status stays UNVALIDATED until fe_residual certifies the functional
    equation; every zero-counting entry point refuses anything else.
    """

    def __init__(self, source, arch, polar, res_lambda, prec, t_max):
        self.source = source
        self.kind = source.kind
        self.label = source.describe()
        self.degree = source.degree
        self.k = source.forms[0].k if source.forms else None
        self.arch = arch
        self.polar = polar
        self.res_lambda = res_lambda
        self.prec = prec
        self.t_max = t_max
        self.status = "UNVALIDATED"
        self.epsilon = None
        self.max_residual = None
        # band data, filled by the builder
        self.c = None
        self.h = None
        self.t_cut = None
        self.y_star = None
        self.n_trunc = None
        self.xi = []
        self.blocks = []
        self.err_scale = mpf(0)
        self.eval_count = 0

    @property
    def arch_dim(self) -> int:
        return sum(1 if typ == "R" else 2 for typ, _ in self.arch)

    def gamma_factor(self, s):
        with mp.workprec(self.prec):
            return _gamma_eval(self.arch, mpc(s))


def _decay_cut(arch, c, tol_ratio, gc):
    """Smallest t with |gamma(c+it)| <= tol_ratio * |gamma(c)|."""
    lo, hi = mpf(2), mpf(4)
    target = tol_ratio * gc
    while abs(_gamma_eval(arch, mpc(c, hi))) > target:
        lo, hi = hi, hi * mpf(1.5)
        if hi > 100000:
            raise ArithmeticError("gamma decay cut not found")
    for _ in range(40):
        mid = (lo + hi) / 2
        if abs(_gamma_eval(arch, mpc(c, mid))) > target:
            lo = mid
        else:
            hi = mid
    return hi


def _kernel_reach(arch, tol_abs):
    """y beyond which |K(y)| <= tol_abs, from shifted-line upper bounds.

    |K(y)| <= y^{-c'} (1/2pi) int |gamma(c'+it)| dt for any c' > 0; the
    minimum over a ladder of lines gives a rigorous, oscillation-free
    envelope that the reach search can bisect against.
    """
    lines = []
    for cp in (2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96):
        step = mpf(1) / 4
        total, t = mpf(0), mpf(0)
        peak = abs(_gamma_eval(arch, mpc(cp, 0)))
        floor = peak * mpf(2) ** (-80)
        while True:
            v = abs(_gamma_eval(arch, mpc(cp, t)))
            total += v * step * (1 if t == 0 else 2)
            t += step
            if v < floor and t > 4:
                break
        lines.append((mpf(cp), total / (2 * mp.pi)))

    def bound(y):
        ly = mpmath.log(y)
        return min(m * mpmath.exp(-cp * ly) for cp, m in lines)

    y = mpf(2)
    while bound(y) > tol_abs:
        y *= 2
        if y > mpf(10) ** 12:
            raise ArithmeticError("kernel reach not found")
    lo, hi = y / 2, y
    for _ in range(50):
        mid = mpmath.sqrt(lo * hi)
        if bound(mid) > tol_abs:
            lo = mid
        else:
            hi = mid
    return hi


def required_coeff_bound(kind: str, k=None, t_max: float = 30.0,
                         prec: int | None = None) -> int:
    """Dirichlet coefficients a band for this kind/weight/height will read.

    Mirrors the reach computation in the band builder so forms can be built
    with a sufficient table before any instance exists.  A polar diagonal
    instance additionally reads its auxiliary symmetric-square band at
    t_max = 10; take the max over both kinds for that case.
    """
    arch = _arch_for(kind, k)
    t_max = max(float(t_max), 6.0)
    if prec is None:
        degree = sum(1 if typ == "R" else 2 for typ, _ in arch)
        prec = 64 + int(math.ceil(degree * math.pi * t_max / 4 / _LN2))
    with mp.workprec(prec + 48):
        gc = abs(_gamma_eval(arch, mpc(3, 0)))
        tol = mpf(2) ** (-(prec + 16))
        y_star = _kernel_reach(arch, tol * gc)
        return int(y_star * y_star * mpf(1.05)) + 8


def _g_from_mpf(x):
    """Exact mpmath.mpf -> gmpy2.mpfr under the active gmpy2 context."""
    sign, man, ex, _ = x._mpf_
    v = gmpy2.mpfr(man) * gmpy2.mpfr(2) ** ex
    return -v if sign else v


def _mpf_from_g(v, prec):
    if v == 0:
        return mpf(0)
    m, e = v.as_mantissa_exp()
    with mp.workprec(prec):
        return +(mpf(int(m)) * mpf(2) ** int(e))


def _build_band(inst) -> None:
    prec = inst.prec
    wp = prec + 48
    with mp.workprec(wp):
        c = mpf(3)
        gc = abs(_gamma_eval(inst.arch, mpc(c, 0)))
        tol = mpf(2) ** (-(prec + 16))
        t_cut = _decay_cut(inst.arch, c, tol / 8, gc)
        y_star = _kernel_reach(inst.arch, tol * gc)
        u_hi = mpmath.log(y_star)
        n_trunc = int(y_star * y_star * mpf(1.05)) + 8
        period = u_hi + (prec + 24) * _LN2 / 3 + 8
        h = 2 * mp.pi / period
        m_cut = int(mpmath.ceil(t_cut / h)) + 1
        gammas = [_gamma_eval(inst.arch, mpc(c, j * h))
                  for j in range(m_cut + 1)]
        pref = h / (2 * mp.pi)
        xi, wts = _gl_rule(24, prec + 32)
        per_side = int(math.ceil(float(u_hi) * (inst.t_max + 8) / 10)) + 4
        r1 = inst.res_lambda if inst.polar else None

    table = inst.source.coeff_table(n_trunc)

    # coefficient rotations and kernel samples in raw gmpy2 (the mpmath
    # loop costs ~7x more; identical arithmetic at wp+16 bits)
    old_ctx = gmpy2.get_context()
    work = gmpy2.context()
    work.precision = wp + 16
    gmpy2.set_context(work)
    try:
        hg = _g_from_mpf(h)
        cg = _g_from_mpf(c)
        dsum = [gmpy2.mpc(0) for _ in range(m_cut + 1)]
        for n in range(1, n_trunc + 1):
            a = table[n]
            if a == 0:
                continue
            ln_n = gmpy2.log(gmpy2.mpfr(n))
            base = _g_from_mpf(a) * gmpy2.exp(-cg * ln_n)
            dsum[0] += base
            sn, cn = gmpy2.sin_cos(hg * ln_n)
            rot = gmpy2.mpc(cn, -sn)
            cur = gmpy2.mpc(base)
            for j in range(1, m_cut + 1):
                cur *= rot
                dsum[j] += cur
        gd = []
        for j in range(m_cut + 1):
            gj = gammas[j]
            gd.append(gmpy2.mpc(_g_from_mpf(gj.real),
                                _g_from_mpf(gj.imag)) * dsum[j])
        two_pref = 2 * _g_from_mpf(pref)
        r1g = _g_from_mpf(r1) if r1 is not None else None

        def psi_at(ug, u_neg):
            sn, cn = gmpy2.sin_cos(hg * ug)
            rot = gmpy2.mpc(cn, -sn)
            acc = gd[0] / 2
            cur = gmpy2.mpc(1)
            for j in range(1, m_cut + 1):
                cur *= rot
                acc += gd[j] * cur
            val = two_pref * acc.real * gmpy2.exp(-cg * ug)
            if r1g is not None and u_neg:
                val -= r1g * gmpy2.exp(-ug) - r1g
            return val

        # log-spaced panels, boundary forced at u = 0 for the subtraction
        blocks = []
        abs_mass = mpf(0)
        with mp.workprec(wp):
            for (ua, ub) in ((-u_hi, mpf(0)), (mpf(0), u_hi)):
                width = (ub - ua) / per_side
                half = width / 2
                mids, wmat = [], []
                for i in range(per_side):
                    mid = ua + width * (2 * i + 1) / 2
                    mids.append(mid)
                    row = []
                    for x_, w_ in zip(xi, wts):
                        u = mid + half * x_
                        val = _mpf_from_g(psi_at(_g_from_mpf(u), u <= 0), wp)
                        row.append(w_ * half * val)
                    wmat.append(row)
                blocks.append((mids, half, width, wmat))
                for i, row in enumerate(wmat):
                    for j, wv in enumerate(row):
                        u = mids[i] + half * xi[j]
                        abs_mass += abs(wv) * (mpmath.exp(3 * u) +
                                               mpmath.exp(mpf(-2.5) * u))
    finally:
        gmpy2.set_context(old_ctx)
    with mp.workprec(wp):
        inst.c = c
        inst.h = h
        inst.t_cut = t_cut
        inst.y_star = y_star
        inst.n_trunc = n_trunc
        inst.xi = xi
        inst.blocks = blocks
        inst.err_scale = +(tol * gc * y_star ** 3 +
                           mpf(2) ** (-prec + 6) * abs_mass)


def build_instance(source, gamma_convention: str = "default",
                   t_max: float = 30.0, prec: int | None = None):
    """Instance with gamma data and a calibrated band; root number unset
    until fe_residual runs.  Degree-9 sources are rejected."""
    if gamma_convention != "default":
        raise ValueError("unknown gamma convention %r" % gamma_convention)
    arch = _arch_params(source)
    t_max = max(float(t_max), 6.0)
    degree = source.degree
    if prec is None:
        # cancellation in the band grows like exp(degree*pi*t/4) at height t
        prec = 64 + int(math.ceil(degree * math.pi * t_max / 4 / _LN2))
    polar, res_l = False, None
    if source.kind == "zeta":
        polar, res_l = True, mpf(1)
    elif source.kind == "rankin":
        f, g = source.forms
        polar = (f.k, f.index) == (g.k, g.index)
        if polar:
            aux = build_instance(lseries.sym2(f), t_max=10.0)
            fe_residual(aux)
            res_l = l_value(aux, 1).real
    res_lambda = None
    if polar:
        with mp.workprec(prec + 48):
            res_lambda = +(_gamma_eval(arch, mpc(1, 0)).real * res_l)
    inst = LFunctionInstance(source, arch, polar, res_lambda, prec, t_max)
    _build_band(inst)
    return inst


# ---------------------------------------------------------------------------
# Evaluation


def _band_pair(inst, s, want_deriv: bool):
    """(band integral, its s-derivative) at working precision."""
    xi = inst.xi
    tot = mpc(0, 0)
    dtot = mpc(0, 0)
    for mids, half, width, wmat in inst.blocks:
        exi = [mpmath.exp(s * (half * x_)) for x_ in xi]
        step = mpmath.exp(s * width)
        cur = mpmath.exp(s * mids[0])
        for i, row in enumerate(wmat):
            for j in range(len(xi)):
                term = cur * exi[j] * row[j]
                tot += term
                if want_deriv:
                    dtot += term * (mids[i] + half * xi[j])
            cur *= step
    return tot, dtot


def complete_eval(inst, s, with_bound: bool = False):
    """Lambda(s); optionally also a crude absolute error bound.

    Raises on evaluation outside the calibrated strip |Im s| <= t_max + 2
    and at the poles of a polar instance.
    """
    with mp.workprec(inst.prec):
        sv = mpc(s)
        if abs(sv.imag) > inst.t_max + 2:
            raise ValueError(
                "Im s = %s outside calibrated band (t_max %s)"
                % (sv.imag, inst.t_max))
        if inst.polar and (sv == 1 or sv == 0):
            raise ValueError("pole of the completed function at s = %s" % s)
        val, _ = _band_pair(inst, sv, False)
        if inst.polar:
            val += inst.res_lambda / (sv - 1) - inst.res_lambda / sv
        inst.eval_count += 1
        if not with_bound:
            return +val
        return +val, +inst.err_scale


def l_value(inst, s):
    """L(s) = Lambda(s) / gamma(s)."""
    with mp.workprec(inst.prec):
        return complete_eval(inst, s) / _gamma_eval(inst.arch, mpc(s))


def _eval_pair(inst, s):
    """(Lambda, Lambda') for the contour integrand."""
    with mp.workprec(inst.prec):
        sv = mpc(s)
        val, dval = _band_pair(inst, sv, True)
        if inst.polar:
            r1 = inst.res_lambda
            val += r1 / (sv - 1) - r1 / sv
            dval += -r1 / (sv - 1) ** 2 + r1 / sv ** 2
        inst.eval_count += 1
        return val, dval


_FE_POINTS = (complex(1.35, 0.55), complex(1.8, 1.15), complex(2.2, 0.45),
              complex(1.55, 2.2), complex(2.65, 1.6), complex(1.25, 2.9))


def fe_residual(inst, sample_points=None) -> dict:
    """Fit the root number in Lambda(s) = eps Lambda(1-s) and report the
    worst relative residual; marks the instance VALIDATED or UNVALIDATED."""
    pts = tuple(sample_points) if sample_points is not None else _FE_POINTS
    with mp.workprec(inst.prec):
        left = [complete_eval(inst, p) for p in pts]
        right = [complete_eval(inst, 1 - mpc(p)) for p in pts]
        num = mpc(0, 0)
        den = mpf(0)
        for v, w in zip(left, right):
            num += v * mpmath.conj(w)
            den += abs(w) ** 2
        eps = num / den
        worst = mpf(0)
        for v, w in zip(left, right):
            scale = max(abs(v), abs(w))
            if scale == 0:
                continue
            worst = max(worst, abs(v - eps * w) / scale)
    inst.epsilon = +eps
    inst.max_residual = float(worst)
    ok = abs(abs(eps) - 1) <= mpf(10) ** -8 and worst <= mpf(10) ** -10
    inst.status = "VALIDATED" if ok else "UNVALIDATED"
    return {"epsilon_fit": inst.epsilon, "max_residual": inst.max_residual}


def _require_validated(inst) -> None:
    if inst.status != "VALIDATED":
        raise RuntimeError(
            "instance %s is %s: zero counts refuse to run"
            % (inst.label, inst.status))


# ---------------------------------------------------------------------------
# Contour machinery


@dataclass
class ZeroCountReport:
    label: str
    alpha: float
    T: float
    count: int
    contour_residual: float
    accepted: bool
    alpha_used: float
    retries: int
    boxes: list | None = None


def _adaptive_seg(f, z0, z1, tol, depth: int):
    """Nested GL-10/GL-20 integral of f over the segment [z0, z1]."""
    n10, w10 = _gl_rule(10, 64)
    n20, w20 = _gl_rule(20, 64)
    mid = (z0 + z1) / 2
    half = (z1 - z0) / 2
    i10 = mpc(0, 0)
    for x_, w_ in zip(n10, w10):
        i10 += w_ * f(mid + half * x_)
    i20 = mpc(0, 0)
    for x_, w_ in zip(n20, w20):
        i20 += w_ * f(mid + half * x_)
    i10 *= half
    i20 *= half
    err = abs(i20 - i10)
    if err <= tol or depth <= 0:
        return i20, err
    a, e1 = _adaptive_seg(f, z0, mid, tol * mpf(0.6), depth - 1)
    b, e2 = _adaptive_seg(f, mid, z1, tol * mpf(0.6), depth - 1)
    return a + b, e1 + e2


def _rect_winding(inst, sig_l, sig_r, t0, t1, pole_shifts, tol):
    """Winding number of the pole-cleared completion around a rectangle."""
    with mp.workprec(inst.prec):
        shifts = [mpf(p) for p in pole_shifts]

        def integrand(s):
            lam, dlam = _eval_pair(inst, s)
            v = dlam / lam
            for p in shifts:
                v += 1 / (s - p)
            return v

        corners = [mpc(sig_l, t0), mpc(sig_r, t0),
                   mpc(sig_r, t1), mpc(sig_l, t1)]
        # cheap guard pass: a zero sitting on an edge blows the integrand up
        for a, b in zip(corners, corners[1:] + corners[:1]):
            for q in range(1, 48):
                z = a + (b - a) * mpf(q) / 48
                if abs(integrand(z)) > 3e4:
                    raise ArithmeticError("contour too close to a zero")
        total = mpc(0, 0)
        for a, b in zip(corners, corners[1:] + corners[:1]):
            seg, _ = _adaptive_seg(integrand, a, b, mpf(tol) / 2, 13)
            total += seg
        return total / (2j * mp.pi)


def _count_rect(inst, alpha, sigma_right, t0, t1, tol, max_retries):
    """One rectangle count with the deterministic perturb-and-retry rule."""
    shifts = [0.0]
    for m in range(1, max_retries + 1):
        shifts.extend([m * 1e-4, -m * 1e-4])
    last_exc = None
    for attempt, d in enumerate(shifts[:max_retries + 1]):
        a = alpha + d
        poles = []
        if inst.polar and t0 == 0:
            poles = [p for p in (0, 1) if a < p < sigma_right]
        try:
            raw = _rect_winding(inst, a, sigma_right, t0, t1, poles, tol)
        except ArithmeticError as exc:
            last_exc = exc
            continue
        count = int(round(float(raw.real)))
        residual = float(abs(raw - count))
        if residual <= tol and count >= 0:
            return count, residual, a, attempt, True
        last_exc = None
    if last_exc is not None:
        return 0, float("inf"), alpha, len(shifts[:max_retries + 1]), False
    return count, residual, a, attempt, False


def count_zeros_box(inst, alpha, T, box_width=None, sigma_right: float = 3.0,
                    tol: float = 1e-3, max_retries: int = 5):
    """N(alpha, T): zeros with beta >= alpha, 0 <= gamma <= T, by the
    argument principle on [alpha, sigma_right] x [0, T].  Optional box mode
    splits [0, T] into height-box_width strips and reports per-box counts."""
    _require_validated(inst)
    alpha = float(alpha)
    T = float(T)
    if alpha < 0.5:
        raise ValueError("alpha must be >= 1/2")
    if T < 0:
        raise ValueError("T must be >= 0")
    if T == 0:
        return ZeroCountReport(inst.label, alpha, T, 0, 0.0, True, alpha, 0)
    if T > inst.t_max:
        raise ValueError("T exceeds instance t_max %s" % inst.t_max)
    count, residual, a_used, retries, ok = _count_rect(
        inst, alpha, sigma_right, 0.0, T, tol, max_retries)
    boxes = None
    if box_width is not None:
        boxes = []
        lo = 0.0
        while ok and lo < T:
            hi = min(lo + float(box_width), T)
            c, r, _, _, bok = _count_rect(
                inst, a_used, sigma_right, lo, hi, tol, max_retries=0)
            ok = ok and bok
            boxes.append((lo, hi, c))
            residual = max(residual, r)
            lo = hi
        if ok and sum(b[2] for b in boxes) != count:
            ok = False
    return ZeroCountReport(inst.label, alpha, T, count, residual, ok,
                           a_used, retries, boxes)


def count_zeros_strip(inst, T, sigma_right: float = 3.0, tol: float = 1e-3,
                      max_retries: int = 5):
    """All zeros with 0 <= gamma <= T, via the FE-symmetric rectangle
    [1 - sigma_right, sigma_right] x [0, T]."""
    _require_validated(inst)
    T = float(T)
    if T <= 0:
        return ZeroCountReport(inst.label, 1 - sigma_right, T, 0, 0.0, True,
                               1 - sigma_right, 0)
    if T > inst.t_max:
        raise ValueError("T exceeds instance t_max %s" % inst.t_max)
    sig_l = 1 - sigma_right
    count, residual, a_used, retries, ok = _count_rect(
        inst, sig_l, sigma_right, 0.0, T, tol, max_retries)
    return ZeroCountReport(inst.label, sig_l, T, count, residual, ok,
                           a_used, retries)


def scan_line_zeros(inst, t_lo: float, t_hi: float, step: float = 0.05,
                    bisections: int = 60) -> list:
    """Sign-change zeros of the (real) completed function on the critical
    line; the independent oracle for the argument-principle counts."""
    _require_validated(inst)
    use_im = abs(complex(inst.epsilon) - 1) > 0.5

    def val(t):
        z = complete_eval(inst, mpc(mpf(1) / 2, t))
        return z.imag if use_im else z.real

    zeros = []
    with mp.workprec(inst.prec):
        t = mpf(t_lo)
        v_prev = val(t)
        while t < t_hi:
            t_next = min(t + mpf(step), mpf(t_hi))
            v_next = val(t_next)
            if v_prev == 0:
                zeros.append(float(t))
            elif (v_prev > 0) != (v_next > 0):
                lo, hi, vl = t, t_next, v_prev
                for _ in range(bisections):
                    mid = (lo + hi) / 2
                    vm = val(mid)
                    if vm == 0:
                        lo = hi = mid
                        break
                    if (vl > 0) != (vm > 0):
                        hi = mid
                    else:
                        lo, vl = mid, vm
                zeros.append(float((lo + hi) / 2))
            t, v_prev = t_next, v_next
    return zeros


# ---------------------------------------------------------------------------
# Family experiments


@dataclass
class FamilyDensityReport:
    k: int
    alpha: float
    T: float
    mode: str
    box_width: float
    per_pair: list
    aggregate: int
    comparison: float
    ratio: float
    poisoned: bool
    reports: list = field(repr=False, default_factory=list)


def family_density(k: int, alpha: float, T: float, mode: str = "rankin",
                   box_width=None, t_max=None, forms=None):
    """Aggregate N(alpha, T, .) over the weight-k family, with per-pair
    box counts and the (ratio-only) comparison shape."""
    if mode not in ("rankin", "sym2"):
        raise ValueError("mode must be rankin or sym2")
    if mode == "rankin" and k < 24:
        raise ValueError("rankin mode needs k >= 24 (at least two forms)")
    if mode == "sym2" and k < 12:
        raise ValueError("sym2 mode needs k >= 12")
    if box_width is None:
        box_width = 2 * math.log(k) ** 2
    if t_max is None:
        t_max = max(float(T) + 1, 8.0)
    if forms is None:
        bound = required_coeff_bound(mode, k, t_max)
        forms = eigenforms(k, coeff_bound=max(10**4, bound))

    logk = math.log(k)
    per_pair, reports = [], []
    aggregate = 0
    poisoned = False
    if mode == "rankin":
        cache = {}
        for i in range(len(forms)):
            for j in range(len(forms)):
                if i == j:
                    continue
                key = (min(i, j), max(i, j))
                rep = cache.get(key)
                if rep is None:
                    inst = build_instance(
                        lseries.rankin(forms[key[0]], forms[key[1]]),
                        t_max=t_max)
                    fe_residual(inst)
                    rep = count_zeros_box(inst, alpha, T, box_width=box_width)
                    cache[key] = rep
                n_boxes = sum(1 for b in (rep.boxes or []) if b[2] > 0)
                per_pair.append((forms[i].index, forms[j].index,
                                 n_boxes, rep.count))
                reports.append(rep)
                aggregate += rep.count
                poisoned = poisoned or not rep.accepted
        shape = (T * T * math.log(max(T, 1.0001)) *
                 k ** (34 * (1 - alpha) / (3 - 2 * alpha)) * logk ** 25)
    else:
        for f in forms:
            inst = build_instance(lseries.sym2(f), t_max=t_max)
            fe_residual(inst)
            rep = count_zeros_box(inst, alpha, T, box_width=box_width)
            n_boxes = sum(1 for b in (rep.boxes or []) if b[2] > 0)
            per_pair.append((f.index, f.index, n_boxes, rep.count))
            reports.append(rep)
            aggregate += rep.count
            poisoned = poisoned or not rep.accepted
        shape = (T * T * math.log(max(T, 1.0001)) *
                 k ** (22 * (1 - alpha) / (3 - 2 * alpha)) * logk ** 17)
    return FamilyDensityReport(k, float(alpha), float(T), mode,
                               float(box_width), per_pair, aggregate,
                               shape, aggregate / shape, poisoned, reports)


@dataclass
class EtaClassification:
    k: int
    eta: float
    height: float
    h_minus: frozenset
    d_minus: frozenset
    h_ratio: float
    d_ratio: float
    reports: list = field(repr=False, default_factory=list)


def classify_eta(k: int, eta: float, height=None, t_max=None, forms=None):
    """Exceptional sets: forms (pairs) whose Sym^2 (Rankin) L-function has
    a zero in {Re s >= 1 - eta, 0 <= Im s <= height}."""
    if not 0 < eta < 0.5:
        raise ValueError("eta must lie in (0, 1/2)")
    if k < 24:
        raise ValueError("pair classification needs k >= 24")
    if height is None:
        height = min(100.0 * k ** eta, 30.0)
    height = float(height)
    if t_max is None:
        t_max = max(height + 1, 8.0)
    if forms is None:
        bound = max(required_coeff_bound("rankin", k, t_max),
                    required_coeff_bound("sym2", k, t_max))
        forms = eigenforms(k, coeff_bound=max(10**4, bound))
    alpha = 1 - eta
    logk = math.log(k)
    reports = []
    h_minus = set()
    for f in forms:
        inst = build_instance(lseries.sym2(f), t_max=t_max)
        fe_residual(inst)
        rep = count_zeros_box(inst, alpha, height)
        reports.append(rep)
        if not rep.accepted:
            raise ArithmeticError("rejected count for %s" % inst.label)
        if rep.count > 0:
            h_minus.add((k, f.index))
    d_minus = set()
    cache = {}
    for i in range(len(forms)):
        for j in range(len(forms)):
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            rep = cache.get(key)
            if rep is None:
                inst = build_instance(
                    lseries.rankin(forms[key[0]], forms[key[1]]),
                    t_max=t_max)
                fe_residual(inst)
                rep = count_zeros_box(inst, alpha, height)
                cache[key] = rep
                reports.append(rep)
                if not rep.accepted:
                    raise ArithmeticError(
                        "rejected count for %s" % inst.label)
            if rep.count > 0:
                d_minus.add(((k, forms[i].index), (k, forms[j].index)))
    h_shape = k ** (36 * eta) * logk ** 18
    d_shape = k ** (36 * eta) * logk ** 26
    return EtaClassification(k, float(eta), height, frozenset(h_minus),
                             frozenset(d_minus), len(h_minus) / h_shape,
                             len(d_minus) / d_shape, reports)


def convexity_probe(inst, t_grid, epsilon: float = 0.05) -> list:
    """|L(1/2 + eps + it)| against the convexity shape
    (1+|t|)^{1/2-eps} (k+|t|)^{1/2-eps+0.01}; reported, never asserted."""
    _require_validated(inst)
    kk = inst.k if inst.k is not None else 1
    rows = []
    with mp.workprec(inst.prec):
        for t in t_grid:
            s = mpc(mpf(1) / 2 + mpf(epsilon), t)
            lv = abs(complete_eval(inst, s) / _gamma_eval(inst.arch, s))
            shape = ((1 + abs(float(t))) ** (0.5 - epsilon) *
                     (kk + abs(float(t))) ** (0.5 - epsilon + 0.01))
            rows.append({"t": float(t), "abs_l": float(lv),
                         "shape": shape, "ratio": float(lv) / shape})
    return rows

"""Dirichlet and von Mangoldt coefficients for tensor L-functions.

Every source is described by its local Satake multiset at p. We never touch
the roots themselves: the power sums P_m are polynomials in cos(m theta_p)
obtained from Chebyshev recursions on lambda(p), Newton's identities turn
them into elementary symmetric functions (the local factor), and exact power
series inversion in p^{-s} yields the coefficients. Everything stays real by
self-duality.

Memoization caches are plain dicts; values are deterministic, so concurrent
last-write-wins races are benign.
"""

from __future__ import annotations

import math

import mpmath
from mpmath import mp, mpf

from .primes import factorize, smallest_prime_factors

_KIND_DEGREE = {"zeta": 1, "standard": 2, "rankin": 4, "sym2": 3, "sym2pair": 9}


class TensorCoeffSource:
    """Multiplicative coefficient source attached to zero, one, or two forms.

    kind: "zeta" (degree 1), "standard" f (2), "rankin" f x g (4),
    "sym2" f (3), "sym2pair" Sym2 f x Sym2 g (9).
    """

    def __init__(self, kind: str, forms=(), prec: int | None = None):
        if kind not in _KIND_DEGREE:
            raise ValueError("unknown source kind %r" % kind)
        need = {"zeta": 0, "standard": 1, "sym2": 1, "rankin": 2, "sym2pair": 2}[kind]
        if len(forms) != need:
            raise ValueError("kind %s takes %d form(s), got %d" % (kind, need, len(forms)))
        self.kind = kind
        self.forms = tuple(forms)
        if prec is None:
            prec = min(f.prec for f in forms) if forms else 192
        self.prec = prec
        self._cos: dict = {}
        self._local: dict = {}

    @property
    def degree(self) -> int:
        return _KIND_DEGREE[self.kind]

    def describe(self) -> str:
        tags = ["k%d.%d" % (f.k, f.index) for f in self.forms]
        return self.kind if not tags else "%s(%s)" % (self.kind, ",".join(tags))

    # -- Satake data ---------------------------------------------------

    def _cos_table(self, slot: int, p: int, m: int) -> list:
        """cos(j*theta_p) for j = 0..m for the form in position slot."""
        key = (slot, p)
        hit = self._cos.get(key)
        if hit is None:
            lam = self.forms[slot].lambda_(p)
            hit = (lam, [mpf(1), lam / 2])
            self._cos[key] = hit
        lam, tab = hit
        while len(tab) - 1 < m:
            tab.append(lam * tab[-1] - tab[-2])
        return tab

    def power_sum(self, p: int, m: int):
        """P_m = sum of m-th powers of the local Satake multiset."""
        with mp.workprec(self.prec + 32):
            if self.kind == "zeta":
                return mpf(1)
            if self.kind == "standard":
                return 2 * self._cos_table(0, p, m)[m]
            if self.kind == "rankin":
                return 4 * self._cos_table(0, p, m)[m] * self._cos_table(1, p, m)[m]
            if self.kind == "sym2":
                return 1 + 2 * self._cos_table(0, p, 2 * m)[2 * m]
            t = 1 + 2 * self._cos_table(0, p, 2 * m)[2 * m]
            u = 1 + 2 * self._cos_table(1, p, 2 * m)[2 * m]
            return t * u

    def local_coeffs(self, p: int, m_max: int) -> list:
        """Coefficients at p, p^2, ..., p^{m_max} of the inverted local factor."""
        tab = _local_table(self.power_sum, self.degree, self.prec, p, m_max,
                           self._local)
        return tab[1 : m_max + 1]

    def local_factor(self, p: int) -> list:
        """Local polynomial D with D(p^{-s}) = 1/L_p(s), ascending in p^{-s}."""
        with mp.workprec(self.prec + 32):
            psums = [self.power_sum(p, m) for m in range(1, self.degree + 1)]
            elem = _newton_elementary(psums)
            return [elem[j] if j % 2 == 0 else -elem[j] for j in range(len(elem))]

    # -- global coefficients -------------------------------------------

    def coeff(self, n: int):
        """Coefficient at n by multiplicativity; coeff(1) = 1."""
        if n < 1:
            raise ValueError("coefficient index must be >= 1")
        with mp.workprec(self.prec + 32):
            acc = mpf(1)
            for p, m in factorize(n):
                acc *= self.local_coeffs(p, m)[m - 1]
        with mp.workprec(self.prec):
            return +acc

    def coeff_table(self, n_max: int, budget_bytes: int = 2 << 30) -> list:
        """[None, c(1), ..., c(n_max)] via a smallest-prime-factor sieve."""
        return _sieve_table(self.local_coeffs, self.prec, n_max, budget_bytes)


def _local_table(power_sum, degree: int, prec: int, p: int, m_max: int,
                 cache: dict) -> list:
    """Inverted local factor [1, c_1, ..., c_{>=m_max}] at p, memoized."""
    tab = cache.get(p)
    if tab is None or len(tab) - 1 < m_max:
        with mp.workprec(prec + 32):
            psums = [power_sum(p, m) for m in range(1, degree + 1)]
            elem = _newton_elementary(psums)
            tab = _invert_local(elem, max(m_max, len(tab) - 1 if tab else 0))
        cache[p] = tab
    return tab


def _sieve_table(local_coeffs, prec: int, n_max: int, budget_bytes: int) -> list:
    """[None, c(1), ..., c(n_max)] by multiplicativity over smallest factors."""
    est = (n_max + 1) * (64 + prec // 4)
    if est > budget_bytes:
        raise MemoryError(
            "coefficient table of %d entries (~%d bytes) exceeds budget %d"
            % (n_max, est, budget_bytes)
        )
    spf = smallest_prime_factors(n_max)
    out = [None] * (n_max + 1)
    with mp.workprec(prec + 32):
        out[1] = mpf(1)
        for n in range(2, n_max + 1):
            p = int(spf[n])
            rest, m = n, 0
            while rest % p == 0:
                rest //= p
                m += 1
            out[n] = out[rest] * local_coeffs(p, m)[m - 1]
    return out


def _newton_elementary(psums: list) -> list:
    """Elementary symmetric functions e_0..e_d from power sums P_1..P_d."""
    e = [mpf(1)]
    for j in range(1, len(psums) + 1):
        acc = mpf(0)
        sign = 1
        for i in range(1, j + 1):
            acc += sign * e[j - i] * psums[i - 1]
            sign = -sign
        e.append(acc / j)
    return e


def _invert_local(elem: list, m_max: int) -> list:
    """Power series of 1 / sum_j (-1)^j e_j T^j through T^{m_max}."""
    d = len(elem) - 1
    c = [mpf(1)]
    for m in range(1, m_max + 1):
        acc = mpf(0)
        sign = 1
        for i in range(1, min(m, d) + 1):
            acc += sign * elem[i] * c[m - i]
            sign = -sign
        c.append(acc)
    return c


def standard(f) -> TensorCoeffSource:
    return TensorCoeffSource("standard", (f,))


def rankin(f, g) -> TensorCoeffSource:
    return TensorCoeffSource("rankin", (f, g))


def sym2(f) -> TensorCoeffSource:
    return TensorCoeffSource("sym2", (f,))


def sym2_pair(f, g) -> TensorCoeffSource:
    return TensorCoeffSource("sym2pair", (f, g))


def zeta_coeffs(prec: int = 192) -> TensorCoeffSource:
    return TensorCoeffSource("zeta", (), prec=prec)


class VonMangoldtSource:
    """Log-weighted prime-power coefficients of -L'/L for a tensor source."""

    def __init__(self, base: TensorCoeffSource):
        self.base = base
        self._cache: dict = {}
        self._logs: dict = {}

    def _log(self, p: int):
        v = self._logs.get(p)
        if v is None:
            with mp.workprec(self.base.prec + 32):
                v = mpmath.log(p)
            self._logs[p] = v
        return v

    def value(self, n: int):
        """(sum of m-th Satake powers) * log p at n = p^m, else 0."""
        if n < 1:
            raise ValueError("index must be >= 1")
        if n == 1:
            return mpf(0)
        hit = self._cache.get(n)
        if hit is not None:
            return hit
        fac = factorize(n)
        if len(fac) != 1:
            out = mpf(0)
        else:
            p, m = fac[0]
            with mp.workprec(self.base.prec + 32):
                raw = self.base.power_sum(p, m) * self._log(p)
            with mp.workprec(self.base.prec):
                out = +raw
        self._cache[n] = out
        return out


def factorization_check_diagonal(f, n_max: int):
    """Max over n <= n_max of |rankin(f,f)(n) - sum_{d|n} sym2(f)(n/d)|.

    The diagonal Rankin-Selberg factors through zeta times the symmetric
    square; the right side is the Dirichlet convolution with all-ones.
    """
    rs = rankin(f, f).coeff_table(n_max)
    s2 = sym2(f).coeff_table(n_max)
    with mp.workprec(f.prec + 32):
        conv = [None] + [mpf(0)] * n_max
        for d in range(1, n_max + 1):
            v = s2[d]
            for n in range(d, n_max + 1, d):
                conv[n] += v
        return max(abs(rs[n] - conv[n]) for n in range(1, n_max + 1))


def factorization_check_sym2tensor(f, g, n_max: int):
    """Degree-16 identity: (f x g) tensor (f x g) = 1 + 3 + 3 + 9.

    Left side built from the squared Rankin-Selberg power sums, right side
    as the 4-fold convolution zeta * sym2(f) * sym2(g) * sym2pair(f, g).
    """
    base = rankin(f, g)
    prec = base.prec
    sq_cache: dict = {}

    def sq_power_sum(p, m):
        ps = base.power_sum(p, m)
        return ps * ps

    def sq_local(p, m):
        return _local_table(sq_power_sum, 16, prec, p, m, sq_cache)[1 : m + 1]

    lhs = _sieve_table(sq_local, prec, n_max, 2 << 30)
    a = sym2(f).coeff_table(n_max)
    b = sym2(g).coeff_table(n_max)
    c = sym2_pair(f, g).coeff_table(n_max)

    with mp.workprec(prec + 32):
        def conv(u, v):
            out = [None] + [mpf(0)] * n_max
            for d in range(1, n_max + 1):
                ud = u[d]
                if ud:
                    for n in range(d, n_max + 1, d):
                        out[n] += ud * v[n // d]
            return out

        ab = conv(a, b)
        abc = conv(ab, c)
        rhs = [None] + [mpf(0)] * n_max
        for d in range(1, n_max + 1):
            v = abc[d]
            for n in range(d, n_max + 1, d):
                rhs[n] += v
        return max(abs(lhs[n] - rhs[n]) for n in range(1, n_max + 1))


def smoothed_dirichlet_sum(source: TensorCoeffSource, s, L):
    """(sum_{l <= l_max} c(l) l^{-s} e^{-l/L}, reported tail bound).

    l_max = ceil(L * (P ln 2 + 20)) pushes the dropped tail below the
    arithmetic noise floor; the bound uses degree * e^{-l_max/L} * zeta(Re s)
    when the zeta factor converges and a crude l_max majorant otherwise.
    """
    prec = source.prec
    l_max = math.ceil(L * (prec * math.log(2) + 20))
    table = source.coeff_table(l_max)
    with mp.workprec(prec + 32):
        s = mpmath.mpmathify(s)
        damp = mpmath.exp(mpf(-1) / L)
        w = mpf(1)
        acc = mpmath.mpc(0)
        for l in range(1, l_max + 1):
            w *= damp
            cl = table[l]
            if cl:
                acc += cl * w * mpmath.power(l, -s)
        sigma = mpmath.re(s)
        zfac = abs(mpmath.zeta(sigma)) if sigma > 1 else mpf(l_max)
        tail = source.degree * mpmath.exp(mpf(-l_max) / L) * zfac
    with mp.workprec(prec):
        acc = +acc
        tail = +tail
    if mpmath.im(acc) == 0:
        return mpmath.re(acc), tail
    return acc, tail

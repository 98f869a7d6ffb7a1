"""Hecke eigenforms on the full modular group.

Pipeline: integral echelon (Miller) basis of the cusp space -> integer Hecke
matrices -> exact characteristic polynomial -> certified real-root isolation
(Sturm) and dyadic refinement -> eigenvectors as exact adjugate polynomials
evaluated at the eigenvalue. The only lossy step is the final normalization
lambda_f(n) = a_f(n) / n^{(k-1)/2}, performed at the requested bit precision.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp, mpf

from .qseries import QSeries, delta, eisenstein

DEFAULT_PREC = 192

_POWER_CACHE: dict = {}


def clear_power_cache() -> None:
    _POWER_CACHE.clear()


def dim_cusp_forms(k: int) -> int:
    """Dimension of the weight-k cusp space on the full modular group."""
    if k % 2 or k < 12:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def _cached_power(name: str, base: QSeries, exp: int, n: int) -> QSeries:
    """base**exp through q^n, reusing previously computed powers of the base."""
    if exp == 0:
        return QSeries([1] + [0] * n)
    key = (name, exp)
    hit = _POWER_CACHE.get(key)
    if hit is not None and hit.precision >= n:
        return hit.truncate(n)
    # build incrementally from the largest usable smaller power
    best_e, best = 0, None
    for (nm, e), ser in _POWER_CACHE.items():
        if nm == name and e < exp and ser.precision >= n and e > best_e:
            best_e, best = e, ser
    acc = best.truncate(n) if best is not None else None
    e = best_e
    while e < exp:
        acc = base if acc is None else acc * base
        e += 1
        _POWER_CACHE[(name, e)] = acc
    return acc


def miller_basis(k: int, n: int) -> list:
    """Integral echelon basis g_1..g_d of the weight-k cusp space through q^n.

    a_{g_i}(j) = delta_{ij} for 1 <= i, j <= d. Construction: products
    Delta^j E_4^a E_6^b of total weight k are triangular in their leading
    coefficient, then integer row reduction gives the echelon form (which is
    unique, so the choice of generating products does not matter).
    """
    d = dim_cusp_forms(k)
    if n < d:
        raise ValueError("need at least %d coefficients at weight %d" % (d, k))
    if d == 0:
        return []
    e4 = eisenstein(4, n)
    e6 = eisenstein(6, n)
    dl = delta(n)
    rows = []
    for j in range(1, d + 1):
        w = k - 12 * j
        b = 0 if w % 4 == 0 else 1
        a = (w - 6 * b) // 4
        ser = _cached_power("delta", dl, j, n)
        if a:
            ser = ser * _cached_power("e4", e4, a, n)
        if b:
            ser = ser * e6
        rows.append(ser)
    # back-substitute: rows[j] has leading 1 at q^{j+1}
    for i in range(d - 2, -1, -1):
        for j in range(i + 1, d):
            c = rows[i].coeff(j + 1)
            if c:
                rows[i] = rows[i] - rows[j].scale(c)
    return rows


def hecke_matrix(k: int, p: int, n: int | None = None, basis: list | None = None) -> list:
    """Integer matrix of T_p on the echelon basis, rows indexed by g_i.

    Row i lists the coefficients of T_p g_i in the echelon basis:
    M[i][j] = a_{g_i}(p*(j+1)) + p^{k-1} * a_{g_i}((j+1)/p).
    Requires basis precision >= p * dim.
    """
    d = dim_cusp_forms(k)
    if d == 0:
        return []
    if basis is None:
        basis = miller_basis(k, n if n is not None else p * d)
    if basis[0].precision < p * d:
        raise ValueError("basis precision %d < p*dim = %d" % (basis[0].precision, p * d))
    pk = p ** (k - 1)
    mat = []
    for i in range(d):
        row = []
        for j in range(1, d + 1):
            v = basis[i].coeff(p * j)
            if j % p == 0:
                v += pk * basis[i].coeff(j // p)
            row.append(v)
        mat.append(row)
    return mat


def _mat_mul(a: list, b: list) -> list:
    d = len(a)
    return [
        [sum(a[i][t] * b[t][j] for t in range(d)) for j in range(d)]
        for i in range(d)
    ]


def charpoly(mat: list) -> list:
    """Monic characteristic polynomial det(xI - M), descending coefficients.

    Faddeev-LeVerrier; every division is exact because the coefficients are
    the (integer) signed elementary symmetric functions of the eigenvalues.
    """
    d = len(mat)
    coeffs = [1]
    b = [row[:] for row in mat]
    for m in range(1, d + 1):
        tr = sum(b[i][i] for i in range(d))
        if tr % m:
            raise ArithmeticError("characteristic polynomial drifted off ZZ")
        a_m = -(tr // m)
        coeffs.append(a_m)
        if m < d:
            for i in range(d):
                b[i][i] += a_m
            b = _mat_mul(mat, b)
    return coeffs


# ---------------------------------------------------------------------------
# exact real-root machinery (univariate, integer coefficients, descending)


def _poly_eval_frac(coeffs: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deriv(coeffs: list) -> list:
    d = len(coeffs) - 1
    return [c * (d - i) for i, c in enumerate(coeffs[:-1])]


def _sturm_chain(coeffs: list) -> list:
    chain = [[Fraction(c) for c in coeffs], [Fraction(c) for c in _poly_deriv(coeffs)]]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        a, b = chain[-2], chain[-1]
        # polynomial remainder of a by b
        r = a[:]
        while len(r) >= len(b) and any(r):
            if r[0] == 0:
                r = r[1:]
                continue
            f = r[0] / b[0]
            r = [r[i + 1] - f * (b[i + 1] if i + 1 < len(b) else 0) for i in range(len(r) - 1)]
        while r and r[0] == 0:
            r = r[1:]
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain: list, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _poly_eval_frac(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def is_squarefree(coeffs: list) -> bool:
    """True iff the integer polynomial has no repeated complex root."""
    chain = _sturm_chain(coeffs)
    # Euclid terminates at a nonzero constant iff gcd(p, p') is constant
    return len(chain[-1]) == 1 and chain[-1][0] != 0


def _int_det(rows: list) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [row[:] for row in rows]
    n = len(m)
    sign, prev = 1, 1
    for i in range(n - 1):
        if m[i][i] == 0:
            for r in range(i + 1, n):
                if m[r][i]:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
            m[r][i] = 0
        prev = m[i][i]
    return sign * m[-1][-1]


def charpoly_discriminant(coeffs: list) -> int:
    """Exact discriminant of an integer polynomial, descending coefficients.

    (-1)^{d(d-1)/2} Res(f, f') / lc(f) with the resultant taken as the
    Sylvester determinant; nonzero certifies simple roots.
    """
    d = len(coeffs) - 1
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    dp = _poly_deriv(coeffs)
    size = 2 * d - 1
    rows = []
    for i in range(d - 1):
        rows.append([0] * i + list(coeffs) + [0] * (size - d - 1 - i))
    for i in range(d):
        rows.append([0] * i + list(dp) + [0] * (size - d - i))
    res = _int_det(rows)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    num = sign * res
    if num % coeffs[0]:
        raise ArithmeticError("discriminant is not integral")
    return num // coeffs[0]


def isolate_real_roots(coeffs: list) -> list:
    """Disjoint rational intervals (lo, hi), each containing one real root."""
    lead = abs(coeffs[0])
    bound = Fraction(1) + Fraction(max(abs(c) for c in coeffs), lead)
    chain = _sturm_chain(coeffs)

    def count(lo, hi):
        return _sign_changes(chain, lo) - _sign_changes(chain, hi)

    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        c = count(lo, hi)
        if c == 0:
            continue
        if c == 1:
            # shrink away from endpoints that are roots of intermediate terms
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        while _poly_eval_frac([Fraction(c0) for c0 in coeffs], mid) == 0:
            mid = (lo + 2 * hi) / 3
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def refine_root(coeffs: list, lo: Fraction, hi: Fraction, prec: int) -> Fraction:
    """Refine an isolating interval to relative width 2^-(prec+16).

    Safeguarded Newton on dyadic rationals with exact sign checks; every
    accepted step keeps a sign change inside [lo, hi], so the result is a
    certified enclosure midpoint.
    """
    p = [Fraction(c) for c in coeffs]
    dp = [Fraction(c) for c in _poly_deriv(coeffs)]
    flo = _poly_eval_frac(p, lo)
    if flo == 0:
        return lo
    if _poly_eval_frac(p, hi) == 0:
        return hi
    slo = 1 if flo > 0 else -1
    scale = max(abs(lo), abs(hi), Fraction(1))
    target = scale / (Fraction(2) ** (prec + 16))
    qbits = prec + 48

    def dyadic(x: Fraction) -> Fraction:
        den = Fraction(2) ** qbits
        return Fraction(round(x * den)) / den

    while hi - lo > target:
        mid = dyadic((lo + hi) / 2)
        if not lo < mid < hi:
            mid = (lo + hi) / 2
        fmid = _poly_eval_frac(p, mid)
        if fmid == 0:
            return mid
        # Newton proposal from the midpoint, used only if it stays bracketed
        dmid = _poly_eval_frac(dp, mid)
        if dmid != 0:
            cand = dyadic(mid - fmid / dmid)
            if lo < cand < hi and cand != mid:
                fcand = _poly_eval_frac(p, cand)
                if fcand == 0:
                    return cand
                a, b = (mid, cand) if mid < cand else (cand, mid)
                fa = fmid if mid < cand else fcand
                if (fa > 0) != ((_poly_eval_frac(p, b)) > 0):
                    lo, hi, slo = a, b, (1 if fa > 0 else -1)
                    continue
        if (fmid > 0) == (slo > 0):
            lo, flo, slo = mid, fmid, (1 if fmid > 0 else -1)
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# eigenvector extraction


def _padd(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_mat_det(m: list) -> list:
    """Determinant of a small matrix with integer-polynomial entries (ascending)."""
    d = len(m)
    if d == 0:
        return [1]
    if d == 1:
        return m[0][0]
    acc = [0]
    for j in range(d):
        if not any(m[0][j]):
            continue
        minor = [[m[i][t] for t in range(d) if t != j] for i in range(1, d)]
        term = _pmul(m[0][j], _poly_mat_det(minor))
        if j % 2:
            term = [-c for c in term]
        acc = _padd(acc, term)
    return acc


def adjugate_column_polys(mat: list, col: int) -> list:
    """Column `col` of adj(A - xI) as integer polynomials in x (ascending).

    Any such column evaluated at an eigenvalue lies in the corresponding
    eigenspace of A.
    """
    d = len(mat)
    b = [
        [([mat[i][j], -1] if i == j else [mat[i][j]]) for j in range(d)]
        for i in range(d)
    ]
    out = []
    for i in range(d):
        minor = [
            [b[r][c] for c in range(d) if c != i]
            for r in range(d)
            if r != col
        ]
        cof = _poly_mat_det(minor)
        if (i + col) % 2:
            cof = [-c for c in cof]
        out.append(cof)
    return out


def _poly_eval_mpf(coeffs_asc: list, x):
    acc = mpf(0)
    for c in reversed(coeffs_asc):
        acc = acc * x + c
    return acc


def _certified_vector(cp: list, a_t: list, lo: Fraction, hi: Fraction, prec: int):
    """Eigenvector of a_t at the root of cp inside [lo, hi], normalized v0 = 1.

    Adjugate-column values can sit far below the coefficient magnitudes (the
    raw coefficients grow like p^{k-1} while eigenvalues are Deligne-sized),
    so the working precision is chosen from the observed magnitude gap and
    the root is re-refined until every component is certified to prec bits.
    """
    d = len(a_t)
    polys_by_col = [adjugate_column_polys(a_t, col) for col in range(d)]
    bits = prec + 64
    for _ in range(8):
        root = refine_root(cp, lo, hi, bits)
        with mp.workprec(bits + 32):
            lam = mpf(root.numerator) / mpf(root.denominator)
            worst_need = 0
            for col in range(d):
                polys = polys_by_col[col]
                vals = [_poly_eval_mpf(q, lam) for q in polys]
                mag = max(
                    _poly_eval_mpf([abs(c) for c in q], abs(lam)) for q in polys
                ) + 1
                err = mag * (d + 2) * mpf(2) ** (10 - bits)
                v0 = abs(vals[0])
                if v0 <= err * 2**16:
                    continue  # cannot certify a nonzero first component yet
                need = prec + 40 + int(mpmath.log(mag / v0, 2)) + d.bit_length()
                if need <= bits:
                    with mp.workprec(prec + 64):
                        vec = tuple(+(v / vals[0]) for v in vals)
                    return root, vec, polys
                worst_need = max(worst_need, need)
        bits = max(bits * 2, worst_need + 64)
    raise ArithmeticError("could not certify an eigenvector to %d bits" % prec)


# ---------------------------------------------------------------------------


OPERATOR_CHAIN = ("T2", "T3", "T5", "T2+T3")


def _operator_matrix(name: str, k: int, basis: list) -> list:
    if name == "T2+T3":
        m2 = hecke_matrix(k, 2, basis=basis)
        m3 = hecke_matrix(k, 3, basis=basis)
        return [[m2[i][j] + m3[i][j] for j in range(len(m2))] for i in range(len(m2))]
    if name in ("T2", "T3", "T5"):
        return hecke_matrix(k, int(name[1:]), basis=basis)
    raise ValueError("unknown operator %r" % name)


class Eigenform:
    """One normalized Hecke eigenform, lambda table materialized lazily."""

    def __init__(self, k, index, prec, coeff_bound, operator, vec, basis_cols,
                 charpoly_coeffs, combo_polys, root_bracket):
        self.k = k
        self.index = index
        self.prec = prec
        self.coeff_bound = coeff_bound
        self.operator = operator
        self.vec = vec  # mpf tuple, vec[0] = a_f(1) = 1
        self._cols = basis_cols  # list of integer coefficient lists, or None
        self.charpoly = charpoly_coeffs
        self.combo_polys = combo_polys
        self.root_bracket = root_bracket
        self._lam: dict = {}

    @property
    def dim(self) -> int:
        return len(self.vec)

    def coefficient(self, n: int):
        """a_f(n) as a high-precision real (exact-integer combination)."""
        if self._cols is None:
            raise ValueError("cache-loaded form carries only lambda values")
        if not 1 <= n <= self.coeff_bound:
            raise ValueError("coefficient index out of range")
        with mp.workprec(self.prec + 32):
            acc = mpf(0)
            for v, col in zip(self.vec, self._cols):
                c = col[n]
                if c:
                    acc += v * c
        return acc

    def lambda_(self, n: int):
        """Normalized coefficient lambda_f(n) = a_f(n) / n^{(k-1)/2}."""
        hit = self._lam.get(n)
        if hit is not None:
            return hit
        if n == 1:
            with mp.workprec(self.prec):
                val = mpf(1)
        else:
            with mp.workprec(self.prec + 32):
                raw = self.coefficient(n) / mpmath.power(n, mpf(self.k - 1) / 2)
            with mp.workprec(self.prec):
                val = +raw
        self._lam[n] = val
        return val

    def lambda_table(self, limit: int | None = None) -> list:
        """[None, lambda(1), ..., lambda(limit)] materialized in one pass."""
        limit = self.coeff_bound if limit is None else limit
        out = [None] * (limit + 1)
        for n in range(1, limit + 1):
            out[n] = self.lambda_(n)
        return out

    def satake_angle(self, p: int):
        """theta_p in [0, pi] with lambda_f(p) = 2 cos(theta_p)."""
        lam = self.lambda_(p)
        with mp.workprec(self.prec + 16):
            half = lam / 2
            if abs(half) > 1:
                if abs(half) - 1 > mpf(2) ** (-self.prec // 2):
                    raise ArithmeticError(
                        "normalized eigenvalue escapes [-2, 2] at p=%d" % p
                    )
                half = mpf(1) if half > 0 else mpf(-1)
            theta = mpmath.acos(half)
        with mp.workprec(self.prec):
            return +theta

    def __repr__(self):
        return "Eigenform(k=%d, index=%d, N=%d, prec=%d)" % (
            self.k, self.index, self.coeff_bound, self.prec,
        )


def eigenforms(k: int, coeff_bound: int | None = None, prec: int = DEFAULT_PREC,
               operator: str | None = None) -> list:
    """All normalized Hecke eigenforms of weight k, sorted by lambda(2).

    coeff_bound defaults to max(10^4, 2*dim). Forcing `operator` skips the
    fallback chain; eigenvalue systems do not depend on that choice.
    """
    d = dim_cusp_forms(k)
    if d == 0:
        return []
    n = coeff_bound if coeff_bound is not None else max(10**4, 2 * d)
    n_basis = max(n, 5 * d + 1)
    basis = miller_basis(k, n_basis)
    chain = (operator,) if operator is not None else OPERATOR_CHAIN
    mat = cp = used = None
    for name in chain:
        m = _operator_matrix(name, k, basis)
        c = charpoly(m)
        if is_squarefree(c):
            mat, cp, used = m, c, name
            break
    if mat is None:
        raise ArithmeticError(
            "no operator in %s has squarefree charpoly at k=%d" % (chain, k)
        )
    intervals = isolate_real_roots(cp)
    if len(intervals) != d:
        raise ArithmeticError(
            "expected %d real eigenvalues at k=%d, isolated %d" % (d, k, len(intervals))
        )
    # the eigenvector problem: rows of the coefficient matrix act on the left,
    # so columns of adj(A - xI) with A = mat^T are the combinations we need
    a_t = [[mat[j][i] for j in range(d)] for i in range(d)]
    cols = [basis[i].coeffs()[: n + 1] for i in range(d)]
    forms = []
    for lo, hi in intervals:
        _, vec, combo = _certified_vector(cp, a_t, lo, hi, prec)
        forms.append(
            Eigenform(
                k, -1, prec, n, used, vec, cols, cp, combo,
                (lo.numerator, lo.denominator, hi.numerator, hi.denominator),
            )
        )
    forms.sort(key=lambda f: (f.lambda_(2), f.lambda_(3) if n >= 3 else 0))
    for i, f in enumerate(forms):
        f.index = i
    return forms

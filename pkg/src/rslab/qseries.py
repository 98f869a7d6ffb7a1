"""Exact integer q-expansions.

A QSeries holds coefficients a_0..a_N of sum a_n q^n + O(q^{N+1}) as plain
Python ints. Products go through Kronecker substitution: coefficients are
packed into one huge integer (fixed-width slots), multiplied by GMP, and
unpacked with a bias so negative slot values never borrow across slots.
This keeps a weight-60-scale product at N = 1e5 under a second while staying
exact.
"""

from __future__ import annotations

import gmpy2

from .primes import sigma_table


def _kronecker_multiply(a: list, b: list, out_len: int) -> list:
    """First out_len coefficients of the convolution of integer sequences a, b."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return [0] * out_len
    bits_a = max(abs(c).bit_length() for c in a)
    bits_b = max(abs(c).bit_length() for c in b)
    if bits_a == 0 or bits_b == 0:
        return [0] * out_len
    # slot must hold sum of min(la, lb) products plus sign headroom
    slot_bits = bits_a + bits_b + min(la, lb).bit_length() + 2
    nbytes = (slot_bits + 7) // 8
    slot = 8 * nbytes
    half = 1 << (slot - 1)

    def pack(coeffs):
        pos = b"".join(
            (c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs
        )
        neg = b"".join(
            ((-c) if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs
        )
        return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(
            int.from_bytes(neg, "little")
        )

    prod = pack(a) * pack(b)
    total = la + lb - 1
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * total, "little")
    raw = int(prod + bias).to_bytes(total * nbytes, "little")
    n = min(out_len, total)
    out = [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(n)
    ]
    return out + [0] * (out_len - n)


class QSeries:
    """Truncated integer power series in q."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [int(x) for x in coeffs]

    @property
    def precision(self) -> int:
        """Highest exponent carried (series known through q^precision)."""
        return len(self.c) - 1

    def coeff(self, n: int) -> int:
        return self.c[n]

    def coeffs(self) -> list:
        return list(self.c)

    def truncate(self, n: int) -> "QSeries":
        """Keep exponents 0..n."""
        if n + 1 > len(self.c):
            raise ValueError("cannot extend precision by truncation")
        return QSeries(self.c[: n + 1])

    def __eq__(self, other):
        return isinstance(other, QSeries) and self.c == other.c

    def __add__(self, other: "QSeries") -> "QSeries":
        n = min(len(self.c), len(other.c))
        return QSeries([self.c[i] + other.c[i] for i in range(n)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = min(len(self.c), len(other.c))
        return QSeries([self.c[i] - other.c[i] for i in range(n)])

    def __neg__(self) -> "QSeries":
        return QSeries([-x for x in self.c])

    def scale(self, m: int) -> "QSeries":
        return QSeries([m * x for x in self.c])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        n = min(len(self.c), len(other.c))
        return QSeries(_kronecker_multiply(self.c[:n], other.c[:n], n))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("negative powers not supported")
        result = QSeries([1] + [0] * self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divide_exact(self, m: int) -> "QSeries":
        """Divide every coefficient by m, asserting exactness."""
        out = []
        for x in self.c:
            q, r = divmod(x, m)
            if r:
                raise ValueError("inexact coefficient division by %d" % m)
            out.append(q)
        return QSeries(out)

    def shift(self, j: int) -> "QSeries":
        """Multiply by q^j, keeping the same precision window."""
        if j < 0:
            raise ValueError("negative shift")
        return QSeries(([0] * j + self.c)[: len(self.c)])

    def __repr__(self):
        head = ", ".join(str(x) for x in self.c[:8])
        more = ", ..." if len(self.c) > 8 else ""
        return "QSeries([%s%s], prec=%d)" % (head, more, self.precision)


def eisenstein(k: int, n: int) -> QSeries:
    """Normalized Eisenstein series E_k for k in {4, 6}, through q^n.

    E_4 = 1 + 240 sum sigma_3(m) q^m, E_6 = 1 - 504 sum sigma_5(m) q^m.
    """
    if k == 4:
        mult, power = 240, 3
    elif k == 6:
        mult, power = -504, 5
    else:
        raise ValueError("eisenstein weight must be 4 or 6")
    sig = sigma_table(power, n)
    return QSeries([1] + [mult * sig[m] for m in range(1, n + 1)])


def delta(n: int) -> QSeries:
    """Discriminant cusp form through q^n, computed as (E_4^3 - E_6^2)/1728."""
    e4 = eisenstein(4, n)
    e6 = eisenstein(6, n)
    return (e4**3 - e6**2).divide_exact(1728)

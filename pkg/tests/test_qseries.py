"""Exact q-expansion arithmetic against brute-force oracles."""

import random

from rslab.primes import factorize, moebius_table, primes_up_to, sigma_table
from rslab.qseries import QSeries, delta, eisenstein


def naive_sigma(power, n):
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


def test_sigma_table_matches_divisor_sums():
    for power in (1, 3, 5):
        tab = sigma_table(power, 200)
        for n in range(1, 201):
            assert tab[n] == naive_sigma(power, n)


def test_primes_and_factorization():
    ps = primes_up_to(100)
    assert ps[:10] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(10**4)) == 1229
    assert factorize(2**3 * 3**2 * 97) == [(2, 3), (3, 2), (97, 1)]
    assert factorize(1) == []


def test_moebius_table():
    mu = moebius_table(50)
    assert [mu[n] for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    # Mertens check
    assert sum(mu[1:51]) == -3


def test_eisenstein_initial_coefficients():
    e4 = eisenstein(4, 3)
    assert e4.coeffs() == [1, 240, 2160, 6720]
    e6 = eisenstein(6, 3)
    assert e6.coeffs() == [1, -504, -16632, -122976]


def test_delta_small_coefficients():
    d = delta(10)
    assert d.coeffs() == [0, 1, -24, 252, -1472, 4830, -6048, -16744,
                          84480, -113643, -115920]


def test_delta_against_eta_product():
    # independent oracle: q * prod_{m>=1} (1 - q^m)^24 by schoolbook arithmetic
    n = 60
    coeffs = [1] + [0] * n
    for m in range(1, n + 1):
        for _ in range(24):
            nxt = coeffs[:]
            for i in range(m, n + 1):
                nxt[i] -= coeffs[i - m]
            coeffs = nxt
    expected = [0] + coeffs[:n]
    assert delta(n).coeffs() == expected


def test_multiply_matches_schoolbook():
    rng = random.Random(20240915)
    for trial in range(20):
        la = rng.randrange(1, 40)
        lb = rng.randrange(1, 40)
        a = [rng.randrange(-10**12, 10**12) for _ in range(la)]
        b = [rng.randrange(-10**12, 10**12) for _ in range(lb)]
        n = min(la, lb) - 1
        ref = [0] * (n + 1)
        for i, x in enumerate(a[: n + 1]):
            for j, y in enumerate(b[: n + 1 - i]):
                ref[i + j] += x * y
        assert (QSeries(a) * QSeries(b)).coeffs() == ref


def test_pow_and_divide_roundtrip():
    e4 = eisenstein(4, 40)
    assert e4**3 == e4 * e4 * e4
    assert (e4**0).coeffs() == [1] + [0] * 40
    assert e4.scale(1728).divide_exact(1728) == e4


def test_series_ring_ops():
    a = QSeries([1, 2, 3])
    b = QSeries([0, -1, 5])
    assert (a + b).coeffs() == [1, 1, 8]
    assert (a - b).coeffs() == [1, 3, -2]
    assert (-a).coeffs() == [-1, -2, -3]
    assert a.scale(7).coeffs() == [7, 14, 21]
    assert a.shift(1).coeffs() == [0, 1, 2]
    assert a.truncate(1).coeffs() == [1, 2]

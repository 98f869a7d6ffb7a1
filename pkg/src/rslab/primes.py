"""Prime tables and elementary multiplicative helpers.

Everything here is exact integer arithmetic. Sieves are numpy-backed for
speed but results are handed out as plain Python ints so downstream exact
code never sees numpy scalar types.
"""

from __future__ import annotations

import numpy as np

_PRIME_CACHE: dict = {"limit": 0, "primes": [], "spf_limit": 0, "spf": None}


def primes_up_to(limit: int) -> list:
    """Return the list of primes <= limit (cached, grows monotonically)."""
    if limit < 2:
        return []
    if limit <= _PRIME_CACHE["limit"]:
        ps = _PRIME_CACHE["primes"]
        # bisect would work, but the tail scan is negligible next to sieving
        import bisect

        return ps[: bisect.bisect_right(ps, limit)]
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    ps = [int(p) for p in np.nonzero(sieve)[0]]
    _PRIME_CACHE["limit"] = limit
    _PRIME_CACHE["primes"] = ps
    return ps


def smallest_prime_factors(limit: int) -> np.ndarray:
    """Smallest-prime-factor table spf[n] for 0 <= n <= limit (spf[0]=spf[1]=0)."""
    if _PRIME_CACHE["spf"] is not None and limit <= _PRIME_CACHE["spf_limit"]:
        return _PRIME_CACHE["spf"]
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p] = np.where(spf[p::p] == 0, p, spf[p::p])
    _PRIME_CACHE["spf"] = spf
    _PRIME_CACHE["spf_limit"] = limit
    return spf


def factorize(n: int) -> list:
    """Prime factorization of n >= 1 as [(p, e), ...] with p ascending."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    spf = _PRIME_CACHE["spf"]
    if spf is not None and n <= _PRIME_CACHE["spf_limit"]:
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def sigma_table(power: int, limit: int) -> list:
    """sigma_power(n) = sum of d^power over divisors d of n, for n = 0..limit.

    Index 0 is unused (set to 0). Built by the divisor-accumulation sieve,
    exact Python ints throughout.
    """
    table = [0] * (limit + 1)
    for d in range(1, limit + 1):
        dp = d**power
        for m in range(d, limit + 1, d):
            table[m] += dp
    return table


def moebius_table(limit: int) -> list:
    """mu(n) for n = 0..limit via the smallest-prime-factor sieve."""
    spf = smallest_prime_factors(limit)
    mu = [0] * (limit + 1)
    if limit >= 1:
        mu[1] = 1
    for n in range(2, limit + 1):
        p = int(spf[n])
        m = n // p
        mu[n] = 0 if m % p == 0 else -mu[m]
    return mu


def primorial_coprime(n: int, z: float) -> bool:
    """True iff n has no prime factor <= z, i.e. gcd(n, P(z)) = 1."""
    if n < 1:
        raise ValueError("expects n >= 1")
    for p in primes_up_to(int(z)):
        if n % p == 0:
            return False
    return True

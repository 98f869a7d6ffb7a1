"""Sieved inverse identity and correction product G."""

import mpmath
import pytest
from mpmath import mp, mpf

from rslab.eigenforms import eigenforms
from rslab.lseries import rankin
from rslab.mollifier import (
    SieveConfig,
    coprime_to_primorial,
    g_factor,
    mollifier_value,
    sieve_survivors,
    verify_inverse,
)

PREC = 160


@pytest.fixture(scope="module")
def delta_pair():
    f = eigenforms(12, coeff_bound=10**4, prec=PREC)[0]
    return f, rankin(f, f)


@pytest.fixture(scope="module")
def pair24():
    forms = eigenforms(24, coeff_bound=1000, prec=PREC)
    return forms[0], forms[1]


def test_sieve_config_validation():
    with pytest.raises(ValueError):
        SieveConfig(16)
    with pytest.raises(ValueError):
        SieveConfig(3.5)
    cfg = SieveConfig(17)
    assert cfg.primes[-1] == 17
    assert SieveConfig().z == 20.0


def test_coprime_examples():
    cfg = SieveConfig(20)
    assert coprime_to_primorial(1, cfg)
    assert not coprime_to_primorial(38, cfg)
    assert coprime_to_primorial(23 * 29, cfg)
    with pytest.raises(ValueError):
        coprime_to_primorial(0, cfg)


def test_survivors_monotone_in_z():
    wide = set(sieve_survivors(200, SieveConfig(17)))
    narrow = set(sieve_survivors(200, SieveConfig(50)))
    assert narrow <= wide
    assert 1 in narrow
    assert min(wide - {1}) == 19


def test_g_factor_first_order_structure(delta_pair):
    f, src = delta_pair
    cfg = SieveConfig(20)
    gf = g_factor(f, f, 2, cfg, source=src)
    with mp.workprec(PREC):
        head = mpmath.mpc(1)
        for p in cfg.primes:
            poly = src.local_factor(p)
            t = mpmath.power(p, -mpf(2))
            acc = poly[-1]
            for c in reversed(poly[:-1]):
                acc = acc * t + c
            head *= acc
        assert abs(gf.value / head - 1) < mpf(10) ** -3


def test_g_factor_truncation_stable(delta_pair):
    f, src = delta_pair
    cfg = SieveConfig(20)
    small = g_factor(f, f, 2, cfg, source=src, prime_budget=2000)
    big = g_factor(f, f, 2, cfg, source=src, prime_budget=4000)
    assert big.cutoff > small.cutoff
    assert abs(big.value - small.value) <= small.tail_bound
    assert big.tail_bound < small.tail_bound


def test_g_factor_near_half_line(delta_pair):
    f, src = delta_pair
    cfg = SieveConfig(20)
    s = mpmath.mpc("0.6", 5)
    gf = g_factor(f, f, s, cfg, source=src, prime_budget=4000)
    assert mpmath.isfinite(gf.value)
    assert gf.tail_bound > 0  # honest: huge this close to the half line
    bigger = g_factor(f, f, s, cfg, source=src, prime_budget=8000)
    assert abs(bigger.value - gf.value) <= gf.tail_bound


def test_g_factor_domain_error(delta_pair):
    f, src = delta_pair
    with pytest.raises(ValueError):
        g_factor(f, f, mpmath.mpc("0.52", 1), SieveConfig(20), source=src)


def test_verify_inverse_delta(delta_pair):
    f, src = delta_pair
    chk = verify_inverse(f, f, 2, SieveConfig(20), 10**4, source=src)
    assert chk.window == (23, 29)
    assert chk.residual <= mpf(10) ** -25
    assert chk.literal_residual <= chk.literal_tail


def test_verify_inverse_pair24(pair24):
    f, g = pair24
    chk = verify_inverse(f, g, 3, SieveConfig(17), 10**3, source=rankin(f, g))
    assert chk.residual <= mpf(10) ** -25


def test_verify_inverse_complex_point(delta_pair):
    f, src = delta_pair
    chk = verify_inverse(f, f, mpmath.mpc(2, 10), SieveConfig(50), 10**3, source=src)
    assert chk.residual <= mpf(10) ** -25


def test_verify_inverse_domain(delta_pair):
    f, src = delta_pair
    with pytest.raises(ValueError):
        verify_inverse(f, f, 1, SieveConfig(20), 100, source=src)


def test_verify_inverse_empty_window(delta_pair):
    # no integer above 1 survives below l_max: check degenerates to G vs 1/L
    f, src = delta_pair
    chk = verify_inverse(f, f, 2, SieveConfig(50), 50, source=src)
    assert chk.window == ()
    assert chk.residual <= mpf(10) ** -30


def test_mollifier_trivial_lengths(delta_pair):
    f, src = delta_pair
    cfg = SieveConfig(20)
    gf = g_factor(f, f, 2, cfg, source=src)
    m1 = mollifier_value(f, f, 2, 1, cfg, source=src)
    assert abs(m1.value - gf.value) < mpf(2) ** -(PREC - 10)
    # 22 < smallest surviving integer above 1 (= 23), so still just G
    m22 = mollifier_value(f, f, 2, 22, cfg, source=src)
    assert abs(m22.value - gf.value) < mpf(2) ** -(PREC - 10)


def test_mollifier_ratio_bounded(delta_pair):
    f, src = delta_pair
    cfg = SieveConfig(20)
    s = 1 + 1 / mpmath.log(12)
    for x in (1, 10, 100, 1000):
        mv = mollifier_value(f, f, s, x, cfg, source=src)
        assert abs(mv.value) / mpmath.sqrt(x) <= 1

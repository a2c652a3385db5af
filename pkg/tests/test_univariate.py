import random
from fractions import Fraction

import pytest

from momentsos.polycore import RealPolynomial, parse_real
from momentsos.univariate import (
    UnivariateError,
    cauchy_bound,
    even_odd_split,
    find_negative_point,
    is_psd,
    poly_gcd,
    root_count,
    square_free_decomposition,
    square_free_part,
    sturm_chain,
)

T = ("t",)
t = RealPolynomial.variable(T, "t")
one = RealPolynomial.constant(T, 1)


def poly(text):
    return parse_real(text, T)


def rand_poly(rng, deg=5, bound=4):
    terms = {}
    for e in range(deg + 1):
        c = rng.randint(-bound, bound)
        if c:
            terms[(e,)] = Fraction(c)
    if not terms:
        terms[(0,)] = Fraction(1)
    return RealPolynomial(T, terms)


def test_poly_gcd_of_built_products():
    rng = random.Random(41)
    for _ in range(20):
        g = rand_poly(rng, deg=2)
        a = rand_poly(rng, deg=2)
        b = rand_poly(rng, deg=2)
        d = poly_gcd(g * a, g * b)
        # d divides both products and the common factor g divides d
        assert (g * a).divmod_by(d)[1].is_zero()
        assert (g * b).divmod_by(d)[1].is_zero()
        assert d.divmod_by(poly_gcd(g, g))[1].is_zero()


def test_square_free_decomposition_reassembles():
    rng = random.Random(43)
    for _ in range(15):
        p = rand_poly(rng, deg=3)
        q = rand_poly(rng, deg=2)
        target = p * p * q
        if target.is_zero() or target.degree() == 0:
            continue
        c, parts = square_free_decomposition(target)
        rebuilt = RealPolynomial.constant(T, c)
        for a, i in parts:
            rebuilt = rebuilt * a ** i
        assert rebuilt == target
        for a, _ in parts:
            assert poly_gcd(a, a.derivative("t")).degree() == 0


def test_square_free_part():
    p = (t - one) ** 3 * (t + one)
    sf = square_free_part(p)
    assert sf == (t - one) * (t + one)
    with pytest.raises(UnivariateError):
        square_free_decomposition(RealPolynomial.zero(T))


def test_even_odd_split():
    p = 3 * (t - one) ** 2 * (t + 2 * one)
    lc, e, r = even_odd_split(p)
    assert lc == 3
    assert e == t - one
    assert r == t + 2 * one
    assert RealPolynomial.constant(T, lc) * e * e * r == p


def test_sturm_chain_ends_in_constant_for_square_free():
    p = poly("t^3 - 2*t + 1")
    chain = sturm_chain(p)
    assert chain[0] == p
    assert chain[-1].degree() == 0


def test_root_count_known_cases():
    assert root_count(poly("t^2 - 2")) == 2
    assert root_count(poly("t^2 + 1")) == 0
    assert root_count(poly("t^3 - t")) == 3
    assert root_count(poly("t^3 - t"), 0, 2) == 1
    assert root_count(poly("t^3 - t"), -2, 2) == 3
    # multiple roots are counted once
    assert root_count((t - one) ** 4) == 1


def test_root_count_agrees_with_numpy_on_random_inputs():
    import numpy as np

    rng = random.Random(47)
    checked = 0
    for _ in range(40):
        p = rand_poly(rng, deg=rng.randint(1, 6))
        if p.degree() < 1:
            continue
        coeffs = [float(p.coefficient((e,))) for e in range(p.degree(), -1, -1)]
        roots = np.roots(coeffs)
        real = {round(r.real, 6) for r in roots if abs(r.imag) < 1e-9}
        # only trust the float oracle when roots are clearly separated
        if any(abs(a - b) < 1e-4 for a in real for b in real if a != b):
            continue
        checked += 1
        assert root_count(p) == len(real), str(p)
    assert checked >= 25


def test_cauchy_bound_contains_all_roots():
    p = poly("t^3 - 10*t + 3")
    m = cauchy_bound(p)
    assert root_count(p, -m, m) == root_count(p)


def test_is_psd_pinned():
    assert is_psd(poly("t^2 + 1"))
    assert is_psd(poly("t^4 - 2*t^2 + 1"))     # (t^2-1)^2 touches zero
    assert is_psd(RealPolynomial.zero(T))
    assert not is_psd(poly("t^2 - 1"))
    assert not is_psd(poly("t^3"))
    assert not is_psd(poly("-t^2"))
    assert not is_psd(poly("-3"))


def test_find_negative_point_is_a_witness():
    rng = random.Random(53)
    psd_count = 0
    for _ in range(40):
        p = rand_poly(rng, deg=rng.randint(0, 6))
        pt = find_negative_point(p)
        if pt is None:
            psd_count += 1
            assert is_psd(p), str(p)
        else:
            assert p.eval([pt]) < 0, (str(p), pt)
    assert psd_count >= 1


def test_find_negative_point_needs_isolation():
    """(t - a)^2 - small dips below zero only near a, beyond the int scan."""
    p = (2 * t - 51 * one) ** 2 * Fraction(1, 4) - Fraction(1, 100) * one
    pt = find_negative_point(p)
    assert pt is not None
    assert p.eval([pt]) < 0
    assert is_psd(p + Fraction(1, 100) * one)


def test_univariate_guard():
    q = RealPolynomial.variable(("x", "y"), "x")
    with pytest.raises(UnivariateError):
        is_psd(q)

import random
from fractions import Fraction

import pytest

from momentsos.polycore import RealPolynomial, parse_real
from momentsos.fracalg import FractionElement, single_norm_basis
from momentsos.sos import (
    Exhausted,
    GramProblem,
    GramSolution,
    Infeasible,
    NotPSD,
    NotPSDWitness,
    SOSCertificate,
    certificate_residual,
    check_infeasibility_witness,
    circle_ideal,
    cylinder_normal,
    cylinder_sos,
    cylinder_witness_points,
    dehomogenize,
    four_square_decomposition,
    fraction_sos,
    gram_solve,
    homogenize,
    multiplier_search,
    newton_basis,
    norm_polynomial,
    plane_witness_points,
    rational_square_parts,
    univariate_sos,
)

V = ("x", "y")
X = RealPolynomial.variable(V, "x")
Y = RealPolynomial.variable(V, "y")
ONE = RealPolynomial.constant(V, 1)
MOTZKIN = parse_real("x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1", V)


def rand_poly(rng, variables, nterms=3, deg=1, bound=3):
    terms = {}
    for _ in range(nterms):
        mon = tuple(rng.randint(0, deg) for _ in variables)
        terms[mon] = terms.get(mon, Fraction(0)) + rng.randint(-bound, bound)
    return RealPolynomial(variables, {m: c for m, c in terms.items() if c})


def sum_of_squares(rng, variables, k=3):
    total = RealPolynomial.zero(variables)
    for _ in range(k):
        q = rand_poly(rng, variables)
        total = total + q * q
    return total


def test_newton_basis_motzkin():
    assert newton_basis(MOTZKIN) == ((0, 0), (1, 1), (1, 2), (2, 1))


def test_newton_basis_excludes_outside_monomials():
    # x^2*y^2 + 1: half polytope has no pure x or pure y points
    p = parse_real("x^2*y^2 + 1", V)
    assert newton_basis(p) == ((0, 0), (1, 1))


def test_norm_polynomial():
    assert str(norm_polynomial()) == "x^2 + y^2"
    assert str(norm_polynomial(("u", "v"))) == "u^2 + v^2"


def test_four_square_decomposition():
    rng = random.Random(61)
    for _ in range(30):
        n = rng.randint(0, 10 ** 6)
        parts = four_square_decomposition(n)
        assert len(parts) <= 4
        assert sum(k * k for k in parts) == n


def test_rational_square_parts():
    rng = random.Random(63)
    for _ in range(30):
        q = Fraction(rng.randint(0, 50), rng.randint(1, 50))
        parts = rational_square_parts(q)
        assert len(parts) <= 4
        assert sum(p * p for p in parts) == q


def test_gram_solve_certifies_random_sums_of_squares():
    rng = random.Random(65)
    for _ in range(10):
        p = sum_of_squares(rng, V)
        if p.is_zero():
            continue
        res = gram_solve(GramProblem(p, newton_basis(p)))
        assert isinstance(res, GramSolution), (str(p), res)
        squares = res.squares()
        total = RealPolynomial.zero(V)
        for q in squares:
            total = total + q * q
        assert total == p


def test_gram_solve_motzkin_is_infeasible_with_witness():
    prob = GramProblem(MOTZKIN, newton_basis(MOTZKIN))
    res = gram_solve(prob)
    assert isinstance(res, Infeasible)
    assert res.value == Fraction(-3, 4)
    assert check_infeasibility_witness(prob, res)


def test_infeasibility_witness_rejects_tampering():
    prob = GramProblem(MOTZKIN, newton_basis(MOTZKIN))
    res = gram_solve(prob)
    bad = Infeasible(dict(res.functional), res.value)
    key = next(iter(bad.functional))
    bad.functional[key] = bad.functional[key] + 1
    assert not check_infeasibility_witness(prob, bad)


def test_multiplier_search_motzkin_level_one():
    cert = multiplier_search(MOTZKIN)
    assert cert.kind == "polynomial"
    assert cert.multiplier == norm_polynomial()
    assert cert.multiplier_exponent == 1
    assert sorted(str(q) for q in cert.squares) == [
        "-x*y^2 + x", "-x^2*y + y", "-x^3*y - x*y^3 + 2*x*y"]
    assert certificate_residual(cert).is_zero()


def test_multiplier_search_exhausts_at_cap():
    res = multiplier_search(MOTZKIN, m_max=0)
    assert isinstance(res, Exhausted)
    assert res.cap == 0
    assert res.trail == ((0, "infeasible"),)


def test_univariate_sos_pinned():
    T = ("t",)
    tt = RealPolynomial.variable(T, "t")
    onet = RealPolynomial.constant(T, 1)
    cert = univariate_sos(tt * tt + onet)
    assert sorted(str(q) for q in cert.squares) == ["1", "t"]
    assert certificate_residual(cert).is_zero()
    with pytest.raises(NotPSD) as e:
        univariate_sos(tt * tt - onet)
    assert e.value.point == (0,)
    assert e.value.value == -1


def test_univariate_sos_random_round_trip():
    rng = random.Random(67)
    T = ("t",)
    for _ in range(15):
        p = sum_of_squares(rng, T, k=2)
        extra = rand_poly(rng, T, deg=1)
        p = p + extra * extra
        if p.is_zero():
            continue
        cert = univariate_sos(p)
        assert certificate_residual(cert).is_zero(), str(p)


def test_univariate_sos_witness_points_are_negative():
    rng = random.Random(69)
    T = ("t",)
    hits = 0
    for _ in range(30):
        p = rand_poly(rng, T, nterms=4, deg=4)
        if p.is_zero():
            continue
        try:
            cert = univariate_sos(p)
            assert certificate_residual(cert).is_zero()
        except NotPSD as e:
            hits += 1
            assert p.eval(e.point) == e.value < 0
    assert hits >= 10


def test_fraction_sos_inverse_norm():
    b = single_norm_basis()
    inv = FractionElement(b, RealPolynomial.constant(b.variables, 1), (1,))
    cert = fraction_sos(inv)
    assert cert.kind == "fraction"
    assert sorted(str(q) for q in cert.squares) == [
        "(x) / (x^2 + y^2)", "(y) / (x^2 + y^2)"]
    assert certificate_residual(cert).is_zero()


def test_fraction_sos_witness():
    b = single_norm_basis()
    inv = FractionElement(b, RealPolynomial.constant(b.variables, 1), (1,))
    res = fraction_sos(inv * (-1))
    assert isinstance(res, NotPSDWitness)
    assert res.point == (1, 0)
    assert res.value == -1


def test_fraction_sos_random_hermitean_squares():
    rng = random.Random(71)
    b = single_norm_basis()
    for _ in range(8):
        total = FractionElement(b, RealPolynomial.zero(b.variables))
        for _ in range(rng.randint(1, 2)):
            num = rand_poly(rng, b.variables, nterms=2, deg=1)
            e = FractionElement(b, num, (rng.randint(0, 1),))
            total = total + e * e
        if total.is_zero():
            continue
        cert = fraction_sos(total)
        assert not isinstance(cert, (NotPSDWitness, Exhausted)), str(total.numerator)
        assert certificate_residual(cert).is_zero()


def test_cylinder_sos_affine_slope():
    cert = cylinder_sos(ONE - X)
    assert cert.kind == "cylinder"
    assert sorted(str(q) for q in cert.squares) == [
        "-1/2*x + 1/2", "-1/2*x + 1/2", "1/2*y", "1/2*y"]
    assert str(cert.ideal_cofactor) == "1/2"
    assert cert.ideal == circle_ideal(V)
    assert certificate_residual(cert).is_zero()


def test_cylinder_sos_witness_and_third_variable():
    res = cylinder_sos(X - 2 * ONE)
    assert isinstance(res, NotPSDWitness)
    assert res.point == (1, 0)
    assert res.value == -1
    V3 = ("x", "y", "z")
    x3 = RealPolynomial.variable(V3, "x")
    one3 = RealPolynomial.constant(V3, 1)
    res3 = cylinder_sos(x3 - 2 * one3)
    assert isinstance(res3, NotPSDWitness)
    assert res3.point == (1, 0, 0)
    z3 = RealPolynomial.variable(V3, "z")
    cert = cylinder_sos(z3 * z3)
    assert [str(q) for q in cert.squares] == ["z"]


def test_cylinder_witness_points_lie_on_the_cylinder():
    pts = list(cylinder_witness_points())
    assert (Fraction(1), Fraction(0), Fraction(0)) in pts
    for x, y, z in pts:
        assert x * x + y * y == 1


def test_plane_witness_points_avoid_origin():
    pts = list(plane_witness_points(2))
    assert (0, 0) not in pts
    assert (1, 0) in pts and (-1, -1) in pts


def test_cylinder_normal_reduces_y_squares():
    p = parse_real("x^2 + y^2 + y^2*x - x", V)
    assert str(cylinder_normal(p)) == "-x^3 + 1"
    nf = cylinder_normal(p)
    assert nf.degree_in("y") <= 1


def test_homogenize_round_trip():
    p = parse_real("x^2 + y + 3", V)
    h = homogenize(p, "u")
    assert h.is_homogeneous()
    assert dehomogenize(h, "u") == p


def test_certificate_residual_detects_tampering():
    cert = multiplier_search(MOTZKIN)
    bad = SOSCertificate(target=cert.target,
                         squares=cert.squares[:-1],
                         multiplier=cert.multiplier,
                         multiplier_exponent=cert.multiplier_exponent,
                         kind=cert.kind)
    assert not certificate_residual(bad).is_zero()

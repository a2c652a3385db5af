import random
from fractions import Fraction

import pytest

from momentsos.polycore import RealPolynomial, parse_real
from momentsos.fracalg import FractionElement, single_norm_basis
from momentsos.graded import (
    SUBALGEBRA_VARIABLES,
    GradingError,
    OddDegree,
    TransferFailure,
    b_membership,
    expand_ternary,
    grade_decompose,
    is_bounded,
    sos_transfer_to_B,
    subalgebra_eval,
    subalgebra_to_fraction,
    ternary_lift,
)
from momentsos.sos import fraction_sos

B = single_norm_basis()
V = B.variables
X = RealPolynomial.variable(V, "x")
Y = RealPolynomial.variable(V, "y")
ONE = RealPolynomial.constant(V, 1)


def rand_elem(rng):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        mon = (rng.randint(0, 3), rng.randint(0, 3))
        terms[mon] = Fraction(rng.randint(-4, 4))
    return FractionElement(B, RealPolynomial(V, terms), (rng.randint(0, 2),))


def test_grade_decompose_pinned_degrees():
    e = FractionElement(B, X ** 3 + X * Y + ONE, (1,))
    g = grade_decompose(e)
    assert g.degrees() == (-2, 0, 1)
    assert str(g.components[1].numerator) == "x^3"
    assert g.components[-2].numerator == ONE


def test_grade_decompose_sums_back():
    rng = random.Random(73)
    for _ in range(20):
        e = rand_elem(rng)
        g = grade_decompose(e)
        assert g.total() == e
        for d, piece in g.components.items():
            num = piece.numerator
            assert num.is_homogeneous()
            assert num.degree() == d + 2 * piece.exponents[0]


def test_degree_is_multiplicative_on_pieces():
    rng = random.Random(75)
    for _ in range(10):
        u = rand_elem(rng)
        v = rand_elem(rng)
        if u.is_zero() or v.is_zero():
            continue
        du = grade_decompose(u).degrees()
        dv = grade_decompose(v).degrees()
        dp = grade_decompose(u * v).degrees()
        assert max(dp) == max(du) + max(dv)
        assert min(dp) == min(du) + min(dv)


def test_is_bounded():
    assert is_bounded(FractionElement(B, X * X, (1,)))
    assert is_bounded(FractionElement(B, ONE))
    assert not is_bounded(FractionElement(B, X))
    assert not is_bounded(FractionElement(B, ONE, (1,)))


def test_ternary_lift_round_trip():
    rng = random.Random(77)
    for _ in range(20):
        deg = 2 * rng.randint(1, 3)
        terms = {}
        for a in range(deg + 1):
            c = rng.randint(-3, 3)
            if c:
                terms[(a, deg - a)] = Fraction(c)
        if not terms:
            continue
        p = RealPolynomial(("x", "y"), terms)
        q = ternary_lift(p)
        assert expand_ternary(q) == p


def test_ternary_lift_pinned_and_guards():
    assert str(ternary_lift(parse_real("x^2", ("x", "y")))) == "u"
    assert str(ternary_lift(parse_real("x*y", ("x", "y")))) == "v"
    assert str(ternary_lift(parse_real("x^2 + y^2", ("x", "y")))) == "u + w"
    with pytest.raises(OddDegree):
        ternary_lift(parse_real("x^3", ("x", "y")))
    with pytest.raises(GradingError):
        ternary_lift(parse_real("x^2 + x", ("x", "y")))


def test_b_membership_pinned():
    m = b_membership(FractionElement(B, X ** 3, (1,)))
    assert m.member
    assert str(m.expression) == "x*X"
    assert m.expression.variables == SUBALGEBRA_VARIABLES
    m2 = b_membership(FractionElement(B, X, (1,)))
    assert not m2.member
    assert m2.negative_degrees == (-1,)
    assert m2.expression is None


def test_b_membership_expression_matches_the_element():
    """The (x, y, X, Y)-expression substitutes back to the element."""
    rng = random.Random(79)
    confirmed = 0
    for _ in range(25):
        e = rand_elem(rng)
        m = b_membership(e)
        if not m.member:
            assert min(grade_decompose(e).degrees()) < 0
            continue
        confirmed += 1
        assert subalgebra_to_fraction(m.expression) == e
        for _ in range(3):
            pt = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(1, 3)))
            assert subalgebra_eval(m.expression, pt) == e.eval(pt)
    assert confirmed >= 5


def test_subalgebra_eval_rejects_origin():
    expr = RealPolynomial.variable(SUBALGEBRA_VARIABLES, "X")
    with pytest.raises(ZeroDivisionError):
        subalgebra_eval(expr, (0, 0))


def test_transfer_to_B_pinned():
    quart = FractionElement(B, X ** 4 + Y ** 4, (2,))
    cert = fraction_sos(quart)
    bc = sos_transfer_to_B(cert)
    assert str(bc.target_expression) == "2*X^2 - 2*X + 1"
    assert [str(q) for q in bc.square_expressions] == [
        "-4/3*X + 1", "8/9*X", "2/9*X", "2/9*X", "2/3*Y", "1/3*Y", "1/3*Y"]
    # the B-expressions form the same identity after substitution
    total = RealPolynomial.zero(SUBALGEBRA_VARIABLES)
    for q in bc.square_expressions:
        total = total + q * q
    assert subalgebra_to_fraction(total) == quart


def test_transfer_refuses_unbounded_targets():
    bad = FractionElement(B, X, (1,))
    cert = fraction_sos(bad * bad)
    with pytest.raises(TransferFailure) as e:
        sos_transfer_to_B(cert)
    assert "negative-degree pieces (-2,)" in str(e.value)

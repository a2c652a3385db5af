import random
from fractions import Fraction

import pytest

from momentsos.polycore import GaussianRational, RealPolynomial, parse_star
from momentsos.fracalg import FractionElement, make_algebra, single_norm_basis
from momentsos.fibres import (
    THETA_GRID,
    AnglePhi,
    DegenerateDirection,
    FibreError,
    FibreParameter,
    InverseSquare,
    ThetaParam,
    affine_normal_form,
    collinear_real_line,
    decide_moment_property,
    fibre_constraints,
    fibre_dimension,
    fibre_quotient_generators,
    lambda_from_phi,
    parse_parameter_line,
    parse_parameter_list,
    restrict_to_line,
    restrict_to_point,
)


def alg_of(*texts, d):
    return make_algebra([parse_star(t, d) for t in texts], d)


def test_angle_phi_exact_table():
    assert AnglePhi(0).sin_cos() == (0, 1)
    assert AnglePhi(Fraction(1, 4)).sin_cos() == (1, 1)
    assert AnglePhi(Fraction(1, 2)).sin_cos() == (1, 0)
    assert AnglePhi(Fraction(3, 4)).sin_cos() == (1, -1)
    # lam is (cos 2phi, sin 2phi), rational at the quarter turns
    assert AnglePhi(0).lam() == (1, 0)
    assert AnglePhi(Fraction(1, 4)).lam() == (0, 1)
    assert AnglePhi(Fraction(1, 2)).lam() == (-1, 0)
    assert AnglePhi(Fraction(3, 4)).lam() == (0, -1)


def test_angle_phi_rejects_inexact_angles():
    with pytest.raises(FibreError):
        AnglePhi(Fraction(1, 3)).sin_cos()
    with pytest.raises(FibreError):
        AnglePhi(Fraction(3, 2))


def test_theta_param_unit_modulus():
    t = ThetaParam(GaussianRational(Fraction(3, 5), Fraction(4, 5)))
    s, c = t.sin_cos()
    assert s * s + c * c == 1
    g, h = t.lam()
    assert g * g + h * h == 1
    with pytest.raises(FibreError):
        ThetaParam(GaussianRational(1, 1))


def test_theta_matches_angle_at_quarter_turns():
    """theta = sin(phi) + i*cos(phi) induces the same lambda as the angle."""
    pairs = [(0, (0, 1)), (Fraction(1, 2), (1, 0))]
    for frac, (s, c) in pairs:
        theta = ThetaParam(GaussianRational(Fraction(s), Fraction(c)))
        assert theta.lam() == AnglePhi(frac).lam()
    assert lambda_from_phi(Fraction(1, 4)) == (0, 1)


def test_parameter_parsing():
    assert parse_parameter_line("phi 1/4") == AnglePhi(Fraction(1, 4))
    assert parse_parameter_line("theta 3/5 4/5") == ThetaParam(
        GaussianRational(Fraction(3, 5), Fraction(4, 5)))
    with pytest.raises(FibreError):
        parse_parameter_line("phi 1/4 extra")
    with pytest.raises(FibreError):
        parse_parameter_line("gamma 1")
    par = parse_parameter_list("# three phases\nphi 0\ntheta 0 1\n\nphi 1/2\n")
    assert len(par) == 3
    with pytest.raises(FibreError):
        parse_parameter_list("# nothing\n")


def test_fibre_constraints_three_denominator_example():
    alg = alg_of("z1", "z2", "z1 + z2 + 1 + i", d=2)
    par = FibreParameter.from_angles([Fraction(1, 4)] * 3)
    cons, fib = fibre_constraints(alg, par)
    assert [str(c) for c in cons] == ["x1 - y1", "x2 - y2", "x1 + x2 - y1 - y2"]
    assert fib.variables == ("x1", "x2", "y1", "y2")
    assert fib.matrix == [[1, 0, -1, 0], [0, 1, 0, -1], [1, 1, -1, -1]]
    assert fib.rhs == [0, 0, 0]
    assert fibre_dimension(fib) == 2


def test_fibre_constraint_in_theta_form():
    alg = alg_of("z", d=1)
    cons, fib = fibre_constraints(alg, FibreParameter.from_thetas(
        [GaussianRational(1)]))
    assert [str(c) for c in cons] == ["x"]
    assert fibre_dimension(fib) == 1


def test_fibre_dimension_empty():
    alg = alg_of("z", "z + 1", d=1)
    par = FibreParameter.from_angles([Fraction(1, 2), Fraction(1, 2)])
    _, fib = fibre_constraints(alg, par)
    assert fibre_dimension(fib) is None


def test_fibre_dimension_point_inside_domain():
    alg = alg_of("z", "z - 1 - i", d=1)
    par = FibreParameter.from_angles([Fraction(1, 2), Fraction(0)])
    _, fib = fibre_constraints(alg, par)
    # x = 0 meets y = 1 at (0, 1), away from both zeros
    assert fibre_dimension(fib) == 0


def test_fibre_dimension_point_excluded():
    """A point fibre sitting on a denominator zero is not a character."""
    alg = alg_of("z", "z", d=1)
    par = FibreParameter.from_angles([Fraction(1, 2), Fraction(0)])
    _, fib = fibre_constraints(alg, par)
    assert fibre_dimension(fib) is None


def test_quotient_generators_pick_the_surviving_square():
    alg = alg_of("z", "z", d=1)
    par = FibreParameter.from_angles([Fraction(0), Fraction(1, 2)])
    gens = fibre_quotient_generators(alg, par)
    x = RealPolynomial.variable(("x", "y"), "x")
    y = RealPolynomial.variable(("x", "y"), "y")
    assert gens == [x, y, InverseSquare(x), InverseSquare(y)]
    assert str(gens[2]) == "1/(x)^2"


def test_collinear_real_line():
    i = GaussianRational(0, 1)
    one = GaussianRational(1)
    assert collinear_real_line(GaussianRational(0), one, 3 * one)
    assert collinear_real_line(i, one + i, 3 * one + i)
    assert not collinear_real_line(GaussianRational(0), one, i)


def test_restrict_to_line_matches_evaluation():
    b = single_norm_basis()
    V = b.variables
    num = RealPolynomial(V, {(2, 0): Fraction(1), (0, 1): Fraction(3)})
    elem = FractionElement(b, num, (1,))
    point, direction = (Fraction(1), Fraction(2)), (Fraction(3), Fraction(-1))
    line = restrict_to_line(elem, point, direction)
    assert line.basis.variables == ("t",)
    for tval in (Fraction(0), Fraction(1), Fraction(-2), Fraction(1, 3)):
        at = tuple(p + tval * d for p, d in zip(point, direction))
        assert line.eval((tval,)) == elem.eval(at)


def test_restrict_to_line_guards():
    b = single_norm_basis()
    elem = FractionElement(b, RealPolynomial.constant(b.variables, 1), (1,))
    with pytest.raises(DegenerateDirection):
        restrict_to_line(elem, (0, 0), (0, 0))
    alg = alg_of("z1", d=2)
    unit = FractionElement(alg.basis,
                           RealPolynomial.constant(alg.variables, 1), (1,))
    # the line varies only z2, staying inside the zero set of z1
    with pytest.raises(FibreError):
        restrict_to_line(unit, (0, 1, 0, 2), (0, 1, 0, 1))
    assert restrict_to_point(unit, (1, 0, 0, 0)) == 1


def test_decision_univariate_denominators_holds():
    alg = alg_of("z", "z - 1", "z^2 + 1", d=1)
    dec = decide_moment_property(alg)
    assert dec.verdict == "Holds"
    assert dec.reason == "univariate-denominators"


def test_decision_noncollinear_triple_holds():
    alg = alg_of("z1", "z1 + 1", "z1 + i", "z2", d=2)
    dec = decide_moment_property(alg)
    assert dec.verdict == "Holds"
    assert dec.reason == "noncollinear-triple-pattern"
    # scalar multiples and a translated single-variable leftover still match
    alg2 = alg_of("2*z1", "z1 + 1", "z1 + i", "3*z2 - 6", d=2)
    assert decide_moment_property(alg2).verdict == "Holds"


def test_decision_three_linear_fails():
    alg = alg_of("z1", "z2", "z1 + z2 + 1 + i", d=2)
    dec = decide_moment_property(alg)
    assert dec.verdict == "Fails"
    assert dec.reason == "three-linear-denominators-d2"
    assert decide_moment_property(alg_of("z1", "z2", "z1 + 1 + i", d=2)).verdict == "Fails"


def test_decision_unknown_collects_grid_evidence():
    alg = alg_of("z1", "z2", "z1 + z2", "z1 - z2", d=2)
    dec = decide_moment_property(alg)
    assert dec.verdict == "Unknown"
    assert dec.reason == "no-decision-rule"
    assert 0 < len(dec.evidence) <= 64
    for ev in dec.evidence:
        assert len(ev.thetas) == alg.m
        assert all(t in THETA_GRID for t in ev.thetas)
        assert ev.dimension is None or ev.dimension >= 0


def test_normal_form_on_standard_family():
    alg = alg_of("z1", "z2", "z1 + z2 + 1 + i", d=2)
    nf = affine_normal_form(alg)
    assert not nf.degenerate
    assert nf.case == 2
    assert [str(p) for p in nf.normal] == ["z1", "z2", "z1 + z2 + (1+i)"]
    assert nf.constant == GaussianRational(1, 1)
    assert nf.residual_t2 == 1  # |1+i|^2 / 2


def test_normal_form_identity_under_substitution():
    """f[order[p]] composed with the images equals scalars[p] * normal[p]."""
    rng = random.Random(31)
    alg = alg_of("z1 + z2", "z1 - z2", "2*z1 + 1 + 3*i", d=2)
    nf = affine_normal_form(alg)
    assert not nf.degenerate
    for _ in range(10):
        pt = [GaussianRational(Fraction(rng.randint(-3, 3)),
                               Fraction(rng.randint(-3, 3))) for _ in range(2)]
        imgs = [im.eval_character(pt) for im in nf.images]
        for pos, idx in enumerate(nf.order):
            lhs = alg.f_list[idx].eval_character(imgs)
            rhs = nf.scalars[pos] * nf.normal[pos].eval_character(pt)
            assert lhs == rhs


def test_normal_form_degenerate_family():
    nf = affine_normal_form(alg_of("z1", "z1 + 1", "2*z1", d=2))
    assert nf.degenerate
    assert str(nf.direction) == "z1"
    with pytest.raises(FibreError):
        affine_normal_form(alg_of("z", "z - 1", "z + 1", d=1))

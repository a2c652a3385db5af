"""Grading of the punctured-plane fraction algebra by homogeneity degree.

A fraction p/(x^2+y^2)^n with p homogeneous of degree 2n+d is homogeneous
of degree d as a function on R^2 minus the origin, and every fraction
element splits uniquely into such pieces.  The subalgebra generated by

    x,  y,  X = x^2/(x^2+y^2),  Y = xy/(x^2+y^2)

is exactly the span of the pieces of nonnegative degree, and the degree-0
pieces are the bounded functions.  This module computes the splitting,
decides subalgebra membership constructively through ternary lifts, and
transfers sum-of-squares certificates into the subalgebra.
"""

from dataclasses import dataclass
from fractions import Fraction

from .fracalg import BasisMismatch, FractionElement, single_norm_basis
from .polycore import RealPolynomial


class GradingError(ValueError):
    pass


class OddDegree(GradingError):
    pass


class TransferFailure(GradingError):
    pass


TERNARY_VARIABLES = ("u", "v", "w")
SUBALGEBRA_VARIABLES = ("x", "y", "X", "Y")

_NORM_BASIS = single_norm_basis()


@dataclass
class GradedElement:
    """Homogeneous pieces keyed by degree; the pieces sum to the element."""

    components: dict

    def degrees(self):
        return tuple(sorted(self.components))

    def total(self):
        out = FractionElement.constant(_NORM_BASIS, 0)
        for d in self.degrees():
            out = out + self.components[d]
        return out


def grade_decompose(elem):
    """Split a fraction element into its homogeneous pieces.

    The numerator terms of total degree 2n+d over denominator exponent n
    form the piece of degree d.
    """
    if elem.basis != _NORM_BASIS:
        raise BasisMismatch("grading needs the single denominator x^2 + y^2")
    n = elem.exponents[0]
    out = {}
    for deg, part in elem.numerator.homogeneous_components().items():
        out[deg - 2 * n] = FractionElement(elem.basis, part, (n,))
    return GradedElement(out)


def is_bounded(elem):
    """True when every homogeneous piece has degree 0."""
    return all(d == 0 for d in grade_decompose(elem).degrees())


def ternary_lift(p):
    """Ternary form q with q(x^2, xy, y^2) equal to the given binary form.

    The lift sends x^a y^b to u^(a/2) w^(b/2) for even a and to
    u^((a-1)/2) v w^((b-1)/2) for odd a.  Lifts differing by a multiple of
    uw - v^2 agree after substitution; this parity rule is the fixed
    deterministic choice.
    """
    if len(p.variables) != 2:
        raise GradingError("a binary form is required")
    if p.is_zero():
        return RealPolynomial.zero(TERNARY_VARIABLES)
    if not p.is_homogeneous():
        raise GradingError("a homogeneous form is required")
    if p.degree() % 2:
        raise OddDegree("the form must have even degree")
    terms = {}
    for (a, b), c in p.terms.items():
        if a % 2 == 0:
            terms[(a // 2, 0, b // 2)] = c
        else:
            # a odd forces b odd because a + b is even
            terms[((a - 1) // 2, 1, (b - 1) // 2)] = c
    return RealPolynomial(TERNARY_VARIABLES, terms)


def expand_ternary(q, variables=("x", "y")):
    """Substitute (x^2, xy, y^2) into a ternary form."""
    x = RealPolynomial.variable(variables, variables[0])
    y = RealPolynomial.variable(variables, variables[1])
    val = q.compose([x * x, x * y, y * y])
    if isinstance(val, Fraction):
        val = RealPolynomial.constant(variables, val)
    return val


@dataclass
class BMembership:
    member: bool
    expression: object = None      # RealPolynomial over (x, y, X, Y)
    negative_degrees: tuple = ()


def _piece_expression(d, comp):
    """Rewrite a degree-d piece as a polynomial in x, y, X, Y.

    Each numerator monomial is split as (binary monomial of degree d) times
    a degree-0 monomial; the degree-0 factor x^a y^b / n^e with a+b = 2e
    becomes its ternary lift evaluated at (X, Y, 1-X).
    """
    X = RealPolynomial.variable(SUBALGEBRA_VARIABLES, "X")
    Y = RealPolynomial.variable(SUBALGEBRA_VARIABLES, "Y")
    one = RealPolynomial.constant(SUBALGEBRA_VARIABLES, 1)
    images = [X, Y, one - X]
    binary = comp.numerator.variables
    out = RealPolynomial.zero(SUBALGEBRA_VARIABLES)
    for (a, b), c in comp.numerator.terms.items():
        take = min(a, d)
        head = RealPolynomial.monomial(SUBALGEBRA_VARIABLES,
                                       (take, d - take, 0, 0))
        tail = RealPolynomial.monomial(binary, (a - take, b - (d - take)), c)
        val = ternary_lift(tail).compose(images)
        if isinstance(val, Fraction):
            val = RealPolynomial.constant(SUBALGEBRA_VARIABLES, val)
        out = out + val * head
    return out


def b_membership(elem):
    """Decide membership in the subalgebra generated by x, y, X, Y.

    Membership holds exactly when every homogeneous piece has nonnegative
    degree; the returned expression then rewrites the element as a
    polynomial in the four generators.
    """
    graded = grade_decompose(elem)
    neg = tuple(d for d in graded.degrees() if d < 0)
    if neg:
        return BMembership(False, None, neg)
    expr = RealPolynomial.zero(SUBALGEBRA_VARIABLES)
    for d in graded.degrees():
        expr = expr + _piece_expression(d, graded.components[d])
    return BMembership(True, expr, ())


def subalgebra_to_fraction(expr):
    """Substitute the generator fractions into an (x, y, X, Y)-polynomial."""
    basis = _NORM_BASIS
    xv = RealPolynomial.variable(basis.variables, "x")
    yv = RealPolynomial.variable(basis.variables, "y")
    images = [FractionElement(basis, xv),
              FractionElement(basis, yv),
              FractionElement(basis, xv * xv, (1,)),
              FractionElement(basis, xv * yv, (1,))]
    val = expr.compose(images)
    if isinstance(val, (int, Fraction)):
        return FractionElement.constant(basis, val)
    return val


def subalgebra_eval(expr, point):
    """Exact value of an (x, y, X, Y)-polynomial at a punctured-plane point."""
    x0, y0 = Fraction(point[0]), Fraction(point[1])
    n0 = x0 * x0 + y0 * y0
    if n0 == 0:
        raise ZeroDivisionError("the origin is outside the character domain")
    return expr.eval([x0, y0, x0 * x0 / n0, x0 * y0 / n0])


@dataclass
class BCertificate:
    """Fraction certificate whose squares all live in the subalgebra."""

    certificate: object            # the underlying fraction SOSCertificate
    target_expression: RealPolynomial
    square_expressions: tuple


def sos_transfer_to_B(cert):
    """Re-tag a fraction certificate as a subalgebra certificate.

    Every square in a fraction decomposition of a subalgebra member is
    itself a member: a square with a negative-degree piece would contribute
    twice its lowest degree to the sum, and squares of real functions
    cannot cancel there.  A failure below therefore signals a broken
    certificate or a target outside the subalgebra, never a valid input.
    """
    if cert.kind != "fraction":
        raise TransferFailure("only fraction certificates transfer")
    target = b_membership(cert.target)
    if not target.member:
        raise TransferFailure(
            "target has negative-degree pieces %s" % (target.negative_degrees,))
    exprs = []
    for q in cert.squares:
        m = b_membership(q)
        if not m.member:
            raise TransferFailure(
                "square %s has negative-degree pieces %s"
                % (q, m.negative_degrees))
        exprs.append(m.expression)
    return BCertificate(cert, target.expression, tuple(exprs))

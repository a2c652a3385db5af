"""Fibre parametrization and the moment-property decision for linear denominators.

Fixing for every denominator f_j = a_j + i*b_j an angle phi_j (or a unit
Gaussian rational theta_j) cuts the hermitean character space down to the
fibre set {a_j sin(phi_j) = b_j cos(phi_j) for all j}.  On that fibre the
bounded coordinates g_j, h_j take the constant values cos(2 phi_j) and
sin(2 phi_j).  When every f_j is linear the fibre is an affine subspace and
its dimension is an exact rank computation.

The decision procedure recognises three exact situations: one complex
variable (always holds), the grouped-triples generator pattern with
non-collinear translation constants (holds), and three linear denominators
in two variables (fails).  Everything else is reported Unknown together
with fibre dimensions sampled over a fixed theta grid; sampling is evidence
only and never upgrades a verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .polycore import (
    ArityMismatch,
    GaussianRational,
    RealPolynomial,
    StarPolynomial,
)
from .fracalg import BasisEntry, DenominatorBasis, FractionElement
from .ratlin import solve_affine


class FibreError(ValueError):
    pass


class DegenerateDirection(FibreError):
    pass


# verdict reasons, stable strings used in reports
REASON_UNIVARIATE = "univariate-denominators"
REASON_TRIPLE_PATTERN = "noncollinear-triple-pattern"
REASON_THREE_LINEAR_D2 = "three-linear-denominators-d2"
REASON_NONE = "no-decision-rule"


# -- fibre parameters -------------------------------------------------------

# (sin, cos) up to positive scale, enough for the homogeneous constraint
_ANGLE_SIN_COS = {
    Fraction(0): (Fraction(0), Fraction(1)),
    Fraction(1, 4): (Fraction(1), Fraction(1)),
    Fraction(1, 2): (Fraction(1), Fraction(0)),
    Fraction(3, 4): (Fraction(1), Fraction(-1)),
}

_ANGLE_LAMBDA = {
    Fraction(0): (Fraction(1), Fraction(0)),
    Fraction(1, 4): (Fraction(0), Fraction(1)),
    Fraction(1, 2): (Fraction(-1), Fraction(0)),
    Fraction(3, 4): (Fraction(0), Fraction(-1)),
}


class AnglePhi:
    """phi = fraction * pi with fraction in [0, 1).

    Exact computation is available for 0, 1/4, 1/2 and 3/4; any other angle
    must be supplied in the theta form instead.
    """

    __slots__ = ("fraction",)

    def __init__(self, fraction):
        fraction = Fraction(fraction)
        if not 0 <= fraction < 1:
            raise FibreError(f"angle fraction {fraction} outside [0, 1)")
        self.fraction = fraction

    def _exact(self, table):
        try:
            return table[self.fraction]
        except KeyError:
            raise FibreError(
                f"angle {self.fraction}*pi has no exact sin/cos; "
                "use a unit theta parameter instead") from None

    def sin_cos(self):
        return self._exact(_ANGLE_SIN_COS)

    def lam(self):
        return self._exact(_ANGLE_LAMBDA)

    def label(self):
        return f"phi {self.fraction}"

    def __eq__(self, other):
        return isinstance(other, AnglePhi) and self.fraction == other.fraction

    def __hash__(self):
        return hash(("phi", self.fraction))

    def __repr__(self):
        return f"AnglePhi({self.fraction})"


class ThetaParam:
    """Unit-modulus Gaussian rational parameter.

    The fibre constraint is Re(f_j * theta_j) = 0 and the induced bounded
    coordinates are lambda = -conj(theta)^2; theta = sin(phi) + i*cos(phi)
    recovers the angle form.
    """

    __slots__ = ("theta",)

    def __init__(self, theta):
        if not isinstance(theta, GaussianRational):
            theta = GaussianRational(*theta) if isinstance(theta, tuple) \
                else GaussianRational(theta)
        if theta.abs2() != 1:
            raise FibreError(f"theta {theta} does not have modulus one")
        self.theta = theta

    def sin_cos(self):
        return self.theta.re, self.theta.im

    def lam(self):
        s, c = self.theta.re, self.theta.im
        return c * c - s * s, 2 * s * c

    def label(self):
        return f"theta {self.theta.re} {self.theta.im}"

    def __eq__(self, other):
        return isinstance(other, ThetaParam) and self.theta == other.theta

    def __hash__(self):
        return hash(("theta", self.theta))

    def __repr__(self):
        return f"ThetaParam({self.theta})"


class FibreParameter:
    """One angle or theta entry per denominator."""

    def __init__(self, entries):
        out = []
        for e in entries:
            if isinstance(e, (AnglePhi, ThetaParam)):
                out.append(e)
            elif isinstance(e, GaussianRational):
                out.append(ThetaParam(e))
            else:
                out.append(AnglePhi(e))
        self.entries = tuple(out)

    @classmethod
    def from_angles(cls, fractions):
        return cls([AnglePhi(f) for f in fractions])

    @classmethod
    def from_thetas(cls, thetas):
        return cls([ThetaParam(t) for t in thetas])

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, FibreParameter) and self.entries == other.entries


def lambda_from_phi(param):
    """Induced (g_j, h_j) values: (cos 2phi, sin 2phi)."""
    if isinstance(param, (AnglePhi, ThetaParam)):
        return param.lam()
    if isinstance(param, GaussianRational):
        return ThetaParam(param).lam()
    return AnglePhi(param).lam()


def parse_parameter_line(line):
    parts = line.split()
    if parts and parts[0] == "phi" and len(parts) == 2:
        return AnglePhi(Fraction(parts[1]))
    if parts and parts[0] == "theta" and len(parts) == 3:
        return ThetaParam(GaussianRational(Fraction(parts[1]), Fraction(parts[2])))
    raise FibreError(f"bad parameter line {line!r}; expected 'phi p/q' or 'theta re im'")


def parse_parameter_list(text):
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entries.append(parse_parameter_line(line))
    if not entries:
        raise FibreError("parameter list is empty")
    return FibreParameter(entries)


# -- affine fibres ----------------------------------------------------------

class AffineFibre:
    """Linear fibre as a rational affine system.

    ``matrix``/``rhs`` encode the constraints; ``excluded`` carries, per
    denominator, the affine system a_j = 0, b_j = 0 whose solutions fall
    outside the character domain.
    """

    def __init__(self, variables, matrix, rhs, excluded=()):
        self.variables = tuple(variables)
        self.matrix = [list(row) for row in matrix]
        self.rhs = list(rhs)
        self.excluded = tuple(excluded)


def _affine_parts(poly):
    """Coefficient row and constant of a degree <= 1 polynomial."""
    if poly.degree() > 1:
        raise FibreError(f"constraint {poly} is not affine")
    nv = len(poly.variables)
    row = []
    for i in range(nv):
        mon = tuple(1 if k == i else 0 for k in range(nv))
        row.append(poly.coefficient(mon))
    return row, poly.coefficient((0,) * nv)


def fibre_constraints(alg, param):
    """Constraint polynomials a_j*sin(phi_j) - b_j*cos(phi_j) for every j.

    Returns (constraints, affine) where affine is the AffineFibre when all
    denominators are linear and None otherwise.
    """
    if len(param) != alg.m:
        raise ArityMismatch(f"{alg.m} parameters required, got {len(param)}")
    constraints = []
    for entry, par in zip(alg.basis.entries, param.entries):
        s, c = par.sin_cos()
        constraints.append(entry.a * s - entry.b * c)
    affine = None
    if alg.all_linear():
        matrix, rhs = [], []
        for con in constraints:
            row, const = _affine_parts(con)
            matrix.append(row)
            rhs.append(-const)
        excluded = []
        for entry in alg.basis.entries:
            excluded.append((_affine_parts(entry.a), _affine_parts(entry.b)))
        affine = AffineFibre(alg.variables, matrix, rhs, excluded)
    return constraints, affine


def fibre_dimension(fib):
    """Dimension of the affine solution set, or None when empty.

    A zero-dimensional solution is additionally checked against the
    character domain; higher-dimensional sets are reported as-is.
    """
    sol = solve_affine(fib.matrix, fib.rhs)
    if sol is None:
        return None
    point, null_basis = sol
    dim = len(null_basis)
    if dim == 0:
        for systems in fib.excluded:
            values = []
            for row, const in systems:
                values.append(sum(r * p for r, p in zip(row, point)) + const)
            if all(v == 0 for v in values):
                return None
    return dim


def collinear_real_line(u, v, w):
    """True when u, v, w lie on one real line in the complex plane."""
    u, v, w = (_gauss(p) for p in (u, v, w))
    dv = v - u
    dw = w - u
    return (dv * dw.conj()).im == 0


def _gauss(value):
    if isinstance(value, GaussianRational):
        return value
    return GaussianRational(value)


# -- quotient generators ----------------------------------------------------

class InverseSquare:
    """Marker for a surviving generator 1/p^2 of a fibre quotient."""

    __slots__ = ("base",)

    def __init__(self, base):
        self.base = base

    def __eq__(self, other):
        return isinstance(other, InverseSquare) and self.base == other.base

    def __hash__(self):
        return hash(("invsq", self.base))

    def __str__(self):
        return f"1/({self.base})^2"

    def __repr__(self):
        return f"InverseSquare({self.base})"


def fibre_quotient_generators(alg, param):
    """Coordinates plus one inverted square per denominator.

    On the fibre of phi_j the norm n_j is proportional to a_j^2 whenever
    cos(phi_j) != 0 (then b_j is a multiple of a_j there) and to b_j^2 when
    cos(phi_j) = 0 (the constraint forces a_j = 0).  The caller is expected
    to pass a parameter with a non-empty fibre.
    """
    if len(param) != alg.m:
        raise ArityMismatch(f"{alg.m} parameters required, got {len(param)}")
    gens = [RealPolynomial.variable(alg.variables, v) for v in alg.variables]
    for entry, par in zip(alg.basis.entries, param.entries):
        _, c = par.sin_cos()
        gens.append(InverseSquare(entry.a if c != 0 else entry.b))
    return gens


# -- line restriction -------------------------------------------------------

def restrict_to_line(elem, point, direction):
    """Substitute the line point + t*direction, giving a univariate fraction.

    The result lives over the basis of restricted norms; a numerator
    identity n_j(line(t)) = a_j(line(t))^2 + b_j(line(t))^2 keeps the
    substitution exact.
    """
    variables = elem.basis.variables
    point = [Fraction(p) for p in point]
    direction = [Fraction(p) for p in direction]
    if len(point) != len(variables) or len(direction) != len(variables):
        raise ArityMismatch(f"line data needs {len(variables)} coordinates")
    if all(c == 0 for c in direction):
        raise DegenerateDirection("line direction is zero")
    tvars = ("t",)
    t = RealPolynomial.variable(tvars, "t")
    images = [t * dc + Fraction(pc) for pc, dc in zip(point, direction)]

    def restricted(poly):
        out = poly.compose(images)
        if isinstance(out, Fraction):
            out = RealPolynomial.constant(tvars, out)
        return out

    entries = []
    for entry, e in zip(elem.basis.entries, elem.exponents):
        ra = restricted(entry.a)
        rb = restricted(entry.b)
        if e > 0 and ra.is_zero() and rb.is_zero():
            raise FibreError("line lies inside a zero set of a used denominator")
        entries.append(BasisEntry(None, ra, rb))
    basis = DenominatorBasis(tvars, entries)
    return FractionElement(basis, restricted(elem.numerator), elem.exponents)


def restrict_to_point(elem, point):
    """Exact value of the fraction at a zero-dimensional fibre."""
    return elem.eval([Fraction(p) for p in point])


# -- decision procedure -----------------------------------------------------

@dataclass(frozen=True)
class FibreEvidence:
    thetas: tuple
    dimension: object  # int or None for empty


@dataclass(frozen=True)
class MomentDecision:
    verdict: str  # Holds | Fails | Unknown
    reason: str
    evidence: tuple = ()


THETA_GRID = (
    GaussianRational(1),
    GaussianRational(0, 1),
    GaussianRational(Fraction(3, 5), Fraction(4, 5)),
    GaussianRational(Fraction(4, 5), Fraction(3, 5)),
)

_GRID_LIMIT = 64


def _univariate_linear_split(f):
    """Decompose f = alpha*z_k + beta; returns (k, beta/alpha) or None."""
    if not f.holomorphic_only() or f.degree() != 1:
        return None
    used = f.variables_used()
    if len(used) != 1:
        return None
    k = used.pop()
    mon = tuple(1 if j == k - 1 else 0 for j in range(2 * f.d))
    alpha = f.coefficient(mon)
    beta = f.coefficient((0,) * (2 * f.d))
    return k, beta / alpha


def _triple_pattern(alg):
    """Grouped generator pattern: d-1 variables carrying three univariate
    linear denominators each, with translation constants off every real
    line, and one last variable carrying a single denominator."""
    if alg.m != 3 * alg.d - 2:
        return False
    groups = {}
    for f in alg.f_list:
        split = _univariate_linear_split(f)
        if split is None:
            return False
        k, const = split
        groups.setdefault(k, []).append(const)
    if len(groups) != alg.d:
        return False
    sizes = sorted(len(cs) for cs in groups.values())
    if sizes != [1] + [3] * (alg.d - 1):
        return False
    for constants in groups.values():
        if len(constants) == 3 and collinear_real_line(*constants):
            return False
    return True


def _theta_grid_evidence(alg):
    tuples = itertools.product(THETA_GRID, repeat=alg.m)
    if alg.m > 3:
        tuples = itertools.islice(tuples, _GRID_LIMIT)
    out = []
    for thetas in tuples:
        param = FibreParameter.from_thetas(thetas)
        _, affine = fibre_constraints(alg, param)
        out.append(FibreEvidence(thetas, fibre_dimension(affine)))
    return tuple(out)


def decide_moment_property(alg):
    """Exact verdict where one applies, Unknown with grid evidence otherwise."""
    if alg.d == 1:
        return MomentDecision("Holds", REASON_UNIVARIATE)
    if alg.all_linear():
        if _triple_pattern(alg):
            return MomentDecision("Holds", REASON_TRIPLE_PATTERN)
        if alg.d == 2 and alg.m == 3:
            return MomentDecision("Fails", REASON_THREE_LINEAR_D2)
        return MomentDecision("Unknown", REASON_NONE, _theta_grid_evidence(alg))
    return MomentDecision("Unknown", REASON_NONE)


# -- normal form for three linear denominators in two variables -------------

@dataclass(frozen=True)
class NormalForm:
    degenerate: bool
    direction: object = None     # common homogeneous form when degenerate
    case: object = None          # 1: z1 + c, 2: z1 + z2 + c
    order: tuple = ()            # position -> original denominator index
    images: tuple = ()           # substitution z_i -> images[i]
    scalars: tuple = ()          # f[order[p]] o images == scalars[p] * normal[p]
    normal: tuple = ()
    constant: object = None      # c above, Gaussian rational
    residual_t2: object = None   # t^2 of the remaining unit rotation to (1+i)t


def _compose_linear(f, images):
    """Substitute images[i] for z_i in a z-only polynomial."""
    total = StarPolynomial.constant(f.d, 0)
    for mon, coeff in f.terms.items():
        term = StarPolynomial.constant(f.d, coeff)
        for img, e in zip(images, mon[:f.d]):
            for _ in range(e):
                term = term * img
        total = total + term
    return total


def affine_normal_form(alg):
    """Reduce three linear denominators in two variables to f1 = z1,
    f2 = z2 and f3 in {z1 + c, z1 + z2 + c}, by an exact affine
    substitution and per-denominator scalar factors.

    The last step of the underlying reduction, a unit rotation taking c to
    (1+i)t with t real, is irrational in general; it is reported through
    residual_t2 = |c|^2 / 2 instead of being applied.  When all three
    homogeneous parts are proportional the family is degenerate and only
    the common direction is returned.
    """
    if alg.d != 2 or alg.m != 3 or not alg.all_linear():
        raise FibreError("normal form needs three linear denominators in two variables")
    linear = []
    for f in alg.f_list:
        u = f.coefficient((1, 0, 0, 0))
        v = f.coefficient((0, 1, 0, 0))
        w = f.coefficient((0, 0, 0, 0))
        linear.append((u, v, w))

    def dependent(p, q):
        return (p[0] * q[1] - p[1] * q[0]).is_zero()

    forms = [(u, v) for u, v, _ in linear]
    if dependent(forms[0], forms[1]) and dependent(forms[0], forms[2]):
        u, v = forms[0]
        z1 = StarPolynomial.z(2, 1)
        z2 = StarPolynomial.z(2, 2)
        direction = z1 + z2 * (v / u) if not u.is_zero() else z2
        return NormalForm(degenerate=True, direction=direction)

    pair = next((i, j) for i, j in ((0, 1), (0, 2), (1, 2))
                if not dependent(forms[i], forms[j]))
    rest = ({0, 1, 2} - set(pair)).pop()

    def reduce_with(order):
        i, j, k = order
        ui, vi, wi = linear[i]
        uj, vj, wj = linear[j]
        det = ui * vj - vi * uj
        m11, m12 = vj / det, -vi / det
        m21, m22 = -uj / det, ui / det
        s1 = -(m11 * wi + m12 * wj)
        s2 = -(m21 * wi + m22 * wj)
        z1 = StarPolynomial.z(2, 1)
        z2 = StarPolynomial.z(2, 2)
        images = (z1 * m11 + z2 * m12 + s1, z1 * m21 + z2 * m22 + s2)
        fk = _compose_linear(alg.f_list[k], images)
        return images, fk

    order = (pair[0], pair[1], rest)
    images, fk = reduce_with(order)
    if fk.coefficient((1, 0, 0, 0)).is_zero():
        order = (pair[1], pair[0], rest)
        images, fk = reduce_with(order)

    up = fk.coefficient((1, 0, 0, 0))
    vp = fk.coefficient((0, 1, 0, 0))
    cp = fk.coefficient((0, 0, 0, 0))
    z1 = StarPolynomial.z(2, 1)
    z2 = StarPolynomial.z(2, 2)
    c = cp / up
    if vp.is_zero():
        case = 1
        scalars = (GaussianRational(1), GaussianRational(1), up)
        normal = (z1, z2, z1 + c)
    else:
        case = 2
        rho = up / vp
        # substituting z2 -> rho*z2 turns the z2 coefficient of fk into up
        images = tuple(_scale_second(img, rho) for img in images)
        scalars = (GaussianRational(1), rho, up)
        normal = (z1, z2, z1 + z2 + c)
    return NormalForm(False, None, case, order, images, scalars, normal,
                      c, c.abs2() / 2)


def _scale_second(image, rho):
    """Multiply the z2 coefficient of an affine z-only image by rho."""
    coeff = image.coefficient((0, 1, 0, 0))
    if coeff.is_zero():
        return image
    z2 = StarPolynomial.z(2, 2)
    return image + z2 * (coeff * (rho - 1))

"""Three *-semigroups on pairs of integers and their *-algebras.

The semigroups are Z^2 with (k,n)* = (n,k), N0 x Z with (k,n)* = (k,-n),
and the half plane k+n >= 0 with (k,n)* = (n,k), all under coordinatewise
addition.  Their semigroup *-algebras embed into function algebras: pairs
map to z^k zbar^n on the punctured plane for the first and third kind and
to t^k (x+iy)^n on the cylinder surface for the second.  This module
builds the embeddings, checks truncated positivity through exact moment
matrices, and certifies hermitean elements as sums a* o a by running the
function-algebra engines and pulling the squares back.
"""

from dataclasses import dataclass
from fractions import Fraction

from .fracalg import FractionElement, single_norm_basis
from .graded import SUBALGEBRA_VARIABLES, sos_transfer_to_B
from .polycore import GaussianRational, RealPolynomial
from .ratlin import herm_ldl
from .sos import Exhausted, NotPSDWitness, SOSCertificate, cylinder_sos, fraction_sos


class SemigroupError(ValueError):
    pass


class InvalidIndex(SemigroupError):
    pass


class MissingValue(SemigroupError):
    pass


class NotHermitean(SemigroupError):
    pass


KINDS = ("Z2", "N0xZ", "Nplus")

CYLINDER_VARIABLES = ("x", "y", "z")

_GR_ZERO = GaussianRational(0)
_GR_ONE = GaussianRational(1)


def _coeff(c):
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, complex):
        raise SemigroupError("float coefficients are not accepted")
    return GaussianRational(c)


class StarSemigroup:
    """One of the three index semigroups, identified by kind."""

    __slots__ = ("kind",)

    def __init__(self, kind):
        if kind not in KINDS:
            raise SemigroupError(f"unknown semigroup kind {kind!r}")
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("StarSemigroup is immutable")

    def valid(self, key):
        k, n = key
        if self.kind == "N0xZ":
            return k >= 0
        if self.kind == "Nplus":
            return k + n >= 0
        return True

    def star_key(self, key):
        k, n = key
        if self.kind == "N0xZ":
            return (k, -n)
        return (n, k)

    def __eq__(self, other):
        return isinstance(other, StarSemigroup) and self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"StarSemigroup({self.kind})"


class SemigroupElement:
    """Finitely supported Gaussian-rational coefficients on a semigroup."""

    __slots__ = ("semigroup", "support")

    def __init__(self, semigroup, support=None):
        clean = {}
        for key, c in (support or {}).items():
            key = (int(key[0]), int(key[1]))
            if not semigroup.valid(key):
                raise InvalidIndex(f"{key} is not an element of {semigroup.kind}")
            c = _coeff(c)
            if not c.is_zero():
                clean[key] = c
        object.__setattr__(self, "semigroup", semigroup)
        object.__setattr__(self, "support", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SemigroupElement is immutable")

    @classmethod
    def delta(cls, semigroup, k, n, coeff=1):
        return cls(semigroup, {(k, n): coeff})

    @classmethod
    def constant(cls, semigroup, value):
        return cls(semigroup, {(0, 0): value})

    def is_zero(self):
        return not self.support

    def coefficient(self, key):
        return self.support.get((int(key[0]), int(key[1])), _GR_ZERO)

    def sorted_support(self):
        return tuple(sorted(self.support))

    def _check(self, other):
        if self.semigroup != other.semigroup:
            raise SemigroupError("elements live over different semigroups")

    def _lift(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return SemigroupElement.constant(self.semigroup, other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        out = dict(self.support)
        for key, c in other.support.items():
            out[key] = out.get(key, _GR_ZERO) + c
        return SemigroupElement(self.semigroup, out)

    __radd__ = __add__

    def __neg__(self):
        return SemigroupElement(self.semigroup,
                                {k: -c for k, c in self.support.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _coeff(other)
            return SemigroupElement(self.semigroup,
                                    {k: v * c for k, v in self.support.items()})
        self._check(other)
        out = {}
        for k1, c1 in self.support.items():
            for k2, c2 in other.support.items():
                key = (k1[0] + k2[0], k1[1] + k2[1])
                out[key] = out.get(key, _GR_ZERO) + c1 * c2
        return SemigroupElement(self.semigroup, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = SemigroupElement.constant(self.semigroup, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def star(self):
        return SemigroupElement(
            self.semigroup,
            {self.semigroup.star_key(k): c.conj() for k, c in self.support.items()})

    def is_hermitean(self):
        return self == self.star()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self._lift(other)
        return (isinstance(other, SemigroupElement)
                and self.semigroup == other.semigroup
                and self.support == other.support)

    def __str__(self):
        if not self.support:
            return "0"
        parts = []
        for key in self.sorted_support():
            c = self.support[key]
            if key == (0, 0):
                parts.append(str(c))
            else:
                parts.append(f"({c})*d{key}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SemigroupElement[{self.semigroup.kind}]({self})"


def sg_star(a):
    return a.star()


def sg_convolve(a, b):
    return a * b


def _gpow(z, e):
    """z^e for a nonzero GaussianRational, any integer e."""
    if e >= 0:
        return z ** e
    return (_GR_ONE / z) ** (-e)


def character_value(semigroup, point, key):
    """Exact value of the character at ``point`` on the pair ``key``.

    Points are (x, y) with x^2+y^2 != 0 for the punctured-plane kinds and
    (x, y, t) with x^2+y^2 = 1 for the cylinder kind.
    """
    k, n = key
    if semigroup.kind == "N0xZ":
        x0, y0, t0 = (Fraction(point[0]), Fraction(point[1]), Fraction(point[2]))
        if x0 * x0 + y0 * y0 != 1:
            raise SemigroupError("cylinder characters need x^2 + y^2 = 1")
        zeta = GaussianRational(x0, y0)
        return _gpow(zeta, n) * Fraction(t0 ** k)
    x0, y0 = Fraction(point[0]), Fraction(point[1])
    z = GaussianRational(x0, y0)
    if z.is_zero():
        raise SemigroupError("the origin is not a character")
    return _gpow(z, k) * _gpow(z.conj(), n)


def element_value(a, point):
    """Evaluate an element at a character point; exact."""
    total = _GR_ZERO
    for key, c in a.support.items():
        total = total + c * character_value(a.semigroup, point, key)
    return total


# -- truncated functionals and moment matrices ------------------------------

class TruncatedFunctional:
    """Functional values over the products of a finite window.

    ``window`` is a tuple of index pairs W and ``values`` maps s* o t for
    s, t in W to GaussianRationals.  A value may be stored for either u or
    u*; the hermitean symmetry value(u*) = conj(value(u)) fills the rest.
    """

    __slots__ = ("semigroup", "window", "values")

    def __init__(self, semigroup, window, values):
        window = tuple(sorted({(int(k), int(n)) for k, n in window}))
        for key in window:
            if not semigroup.valid(key):
                raise InvalidIndex(f"window key {key} is invalid for {semigroup.kind}")
        clean = {}
        for key, c in values.items():
            key = (int(key[0]), int(key[1]))
            if not semigroup.valid(key):
                raise InvalidIndex(f"value key {key} is invalid for {semigroup.kind}")
            clean[key] = _coeff(c)
        for key, c in clean.items():
            sk = semigroup.star_key(key)
            if sk in clean and clean[sk] != c.conj():
                raise SemigroupError(f"values at {key} and {sk} are not conjugate")
        object.__setattr__(self, "semigroup", semigroup)
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "values", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedFunctional is immutable")

    def value(self, key):
        key = (int(key[0]), int(key[1]))
        if key in self.values:
            return self.values[key]
        sk = self.semigroup.star_key(key)
        if sk in self.values:
            return self.values[sk].conj()
        raise MissingValue(f"no value for {key} or its star")


def box_window(semigroup, radius):
    """All valid pairs with |k|, |n| <= radius, sorted."""
    out = []
    for k in range(-radius, radius + 1):
        for n in range(-radius, radius + 1):
            if semigroup.valid((k, n)):
                out.append((k, n))
    return tuple(sorted(out))


def product_window(semigroup, window):
    """Sorted set of products s* o t over the window."""
    out = set()
    for s in window:
        ss = semigroup.star_key(s)
        for t in window:
            out.add((ss[0] + t[0], ss[1] + t[1]))
    return tuple(sorted(out))


def functional_from_atoms(semigroup, atoms, window):
    """Functional of a finite atomic measure on characters.

    ``atoms`` is a sequence of (weight, point) with real rational weights;
    values are filled over the whole product window.
    """
    values = {}
    for key in product_window(semigroup, window):
        total = _GR_ZERO
        for weight, point in atoms:
            total = total + character_value(semigroup, point, key) * Fraction(weight)
        values[key] = total
    return TruncatedFunctional(semigroup, window, values)


def functional_from_element(elem, points, window):
    """Functional induced by a hermitean element on a finite character set.

    The atom at each point carries the element's value there, which is real
    for hermitean input; for sums a* o a the weights are nonnegative and
    every window matrix of the functional is PSD.
    """
    atoms = []
    for point in points:
        v = element_value(elem, point)
        if v.im != 0:
            raise NotHermitean("element has a non-real character value")
        atoms.append((v.re, point))
    return functional_from_atoms(elem.semigroup, atoms, window)


def moment_matrix(functional):
    """Exact hermitean matrix L(s* o t) over the functional's window."""
    sg = functional.semigroup
    window = functional.window
    rows = []
    for s in window:
        ss = sg.star_key(s)
        rows.append([functional.value((ss[0] + t[0], ss[1] + t[1]))
                     for t in window])
    return rows


def truncated_psd_check(functional):
    """Exact PSD check of the moment matrix; the LDL result carries the
    refutation direction when the answer is no."""
    return herm_ldl(moment_matrix(functional))


# -- images in the function algebras ----------------------------------------

@dataclass
class ComplexImage:
    """re + i*im with both parts in the target real algebra."""

    re: object
    im: object
    kind: str                  # "fraction" or "cylinder"


_NORM_BASIS = single_norm_basis()


def _plane_image(a):
    """Sum of c * z^k zbar^n as a pair of fraction elements."""
    from .polycore import StarPolynomial

    t = 0
    for k, n in a.support:
        t = max(t, -k, -n)
    lifted = StarPolynomial.zero(1)
    for (k, n), c in a.support.items():
        lifted = lifted + StarPolynomial(1, {(k + t, n + t): c})
    re, im = lifted.realify()
    return ComplexImage(FractionElement(_NORM_BASIS, re, (t,)),
                        FractionElement(_NORM_BASIS, im, (t,)), "fraction")


def _cylinder_image(a):
    """Sum of c * t^k (x+iy)^n over (x, y, z=t); negative n uses x-iy."""
    plus = {}                  # cache of (x+iy)^e coefficient maps
    minus = {}

    def circle_pow(e, table, sign):
        if e not in table:
            if e == 0:
                table[e] = {(0, 0, 0): _GR_ONE}
            else:
                prev = circle_pow(e - 1, table, sign)
                out = {}
                for (ax, ay, az), c in prev.items():
                    out[(ax + 1, ay, az)] = out.get((ax + 1, ay, az), _GR_ZERO) + c
                    key = (ax, ay + 1, az)
                    out[key] = out.get(key, _GR_ZERO) + c * GaussianRational(0, sign)
                table[e] = out
        return table[e]

    acc = {}
    for (k, n), c in a.support.items():
        table, sign = (plus, 1) if n >= 0 else (minus, -1)
        for (ax, ay, az), f in circle_pow(abs(n), table, sign).items():
            key = (ax, ay, az + k)
            acc[key] = acc.get(key, _GR_ZERO) + c * f
    re_terms, im_terms = {}, {}
    for key, c in acc.items():
        if c.re != 0:
            re_terms[key] = c.re
        if c.im != 0:
            im_terms[key] = c.im
    return ComplexImage(RealPolynomial(CYLINDER_VARIABLES, re_terms),
                        RealPolynomial(CYLINDER_VARIABLES, im_terms), "cylinder")


def to_function_algebra(a):
    """Image of an element under the *-isomorphism onto functions."""
    if a.semigroup.kind == "N0xZ":
        return _cylinder_image(a)
    return _plane_image(a)


def hermitean_image(a):
    """Real image of a hermitean element; the imaginary part must vanish."""
    img = to_function_algebra(a)
    if not img.im.is_zero():
        raise NotHermitean("element is not fixed by the involution")
    return img.re


@dataclass
class ImageAlgebra:
    """Description of the real algebra carrying the hermitean part."""

    kind: str
    variables: tuple
    basis: object = None       # DenominatorBasis for the fraction kinds
    ideal: object = None       # relation polynomial for the cylinder kind
    generators: tuple = ()


def hermitean_image_algebra(semigroup):
    if semigroup.kind == "Z2":
        return ImageAlgebra("fraction", _NORM_BASIS.variables, basis=_NORM_BASIS,
                            generators=("x", "y", "1/(x^2 + y^2)"))
    if semigroup.kind == "N0xZ":
        x = RealPolynomial.variable(CYLINDER_VARIABLES, "x")
        y = RealPolynomial.variable(CYLINDER_VARIABLES, "y")
        one = RealPolynomial.constant(CYLINDER_VARIABLES, 1)
        return ImageAlgebra("cylinder", CYLINDER_VARIABLES,
                            ideal=one - x * x - y * y,
                            generators=CYLINDER_VARIABLES)
    return ImageAlgebra("subalgebra", SUBALGEBRA_VARIABLES, basis=_NORM_BASIS,
                        generators=("x", "y", "x^2/(x^2 + y^2)", "x*y/(x^2 + y^2)"))


# -- pullbacks of squares ----------------------------------------------------

def _compose_semigroup(poly, images, semigroup):
    val = poly.compose(images)
    if isinstance(val, (int, Fraction)):
        return SemigroupElement.constant(semigroup, val)
    return val


def _plane_generators(semigroup):
    half = GaussianRational(Fraction(1, 2))
    mihalf = GaussianRational(0, Fraction(-1, 2))
    z = SemigroupElement.delta(semigroup, 1, 0)
    zb = SemigroupElement.delta(semigroup, 0, 1)
    return (z + zb) * half, (z - zb) * mihalf


def pullback_fraction(q, semigroup):
    """Laurent preimage of p(x, y) / (x^2+y^2)^e under z^k zbar^n."""
    xs, ys = _plane_generators(semigroup)
    num = _compose_semigroup(q.numerator, [xs, ys], semigroup)
    inv = SemigroupElement.delta(semigroup, -1, -1)
    return num * inv ** q.exponents[0]


def pullback_subalgebra(expr, semigroup):
    """Preimage of a polynomial in x, y, X, Y; stays inside k+n >= 0."""
    xs, ys = _plane_generators(semigroup)
    quarter = GaussianRational(Fraction(1, 4))
    miquarter = GaussianRational(0, Fraction(-1, 4))
    v = SemigroupElement.delta(semigroup, 1, -1)
    vb = SemigroupElement.delta(semigroup, -1, 1)
    Xs = (2 + v + vb) * quarter
    Ys = (v - vb) * miquarter
    return _compose_semigroup(expr, [xs, ys, Xs, Ys], semigroup)


def pullback_cylinder(p, semigroup):
    """Preimage of a polynomial in x, y, z with z the free coordinate."""
    half = GaussianRational(Fraction(1, 2))
    mihalf = GaussianRational(0, Fraction(-1, 2))
    w = SemigroupElement.delta(semigroup, 0, 1)
    wb = SemigroupElement.delta(semigroup, 0, -1)
    images = [(w + wb) * half, (w - wb) * mihalf,
              SemigroupElement.delta(semigroup, 1, 0)]
    return _compose_semigroup(p, images, semigroup)


def semigroup_residual(cert):
    """target - sum star(a_i) o a_i, exactly in the semigroup algebra."""
    total = SemigroupElement(cert.target.semigroup)
    for q in cert.squares:
        total = total + q.star() * q
    return cert.target - total


def _finish(cert):
    if not semigroup_residual(cert).is_zero():
        raise SemigroupError("internal error: pulled-back squares do not re-expand")
    return cert


def hermitean_square_certify(a, m_max=6, degree_cap=None, tolerance=1e-9):
    """Certificate a = sum star(a_i) o a_i, a character witness, or Exhausted.

    The element is pushed to its function-algebra image, certified there,
    and the squares are pulled back exactly.  A witness point with negative
    value refutes; Exhausted propagates the engine caps.
    """
    if not a.is_hermitean():
        raise NotHermitean("only hermitean elements can be certified")
    sg = a.semigroup
    if sg.kind == "N0xZ":
        p = hermitean_image(a)
        res = cylinder_sos(p, degree_cap=degree_cap, tolerance=tolerance)
        if isinstance(res, (NotPSDWitness, Exhausted)):
            return res
        squares = tuple(pullback_cylinder(q, sg) for q in res.squares)
        # the relation 1 - x^2 - y^2 pulls back to zero, so the cofactor
        # term vanishes and the identity is exact in the semigroup algebra
        return _finish(SOSCertificate(target=a, squares=squares,
                                      kind="semigroup", semigroup=sg))
    f = hermitean_image(a)
    res = fraction_sos(f, m_max=m_max, tolerance=tolerance)
    if isinstance(res, (NotPSDWitness, Exhausted)):
        return res
    if sg.kind == "Z2":
        squares = tuple(pullback_fraction(q, sg) for q in res.squares)
    else:
        transferred = sos_transfer_to_B(res)
        squares = tuple(pullback_subalgebra(e, sg)
                        for e in transferred.square_expressions)
    return _finish(SOSCertificate(target=a, squares=squares,
                                  multiplier=res.multiplier,
                                  multiplier_exponent=res.multiplier_exponent,
                                  kind="semigroup", semigroup=sg))

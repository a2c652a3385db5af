"""Algebras of polynomial fractions over denominator norms.

A family f_1..f_m of non-constant complex polynomials determines the algebra
of rational functions generated by the coordinates together with 1/f_j and
1/conj(f_j).  Writing f_j = a_j + i*b_j with real polynomials a_j, b_j, the
hermitean part of that algebra is generated by the real coordinates and the
inverted norms 1/(a_j^2 + b_j^2).  This module represents such fractions
exactly: a real polynomial numerator over a product of norm powers.

Canonicalization divides the numerator by n_j = a_j^2 + b_j^2 whenever the
division is exact and the corresponding exponent is positive.  No other
cancellation is attempted; this keeps arithmetic cheap and representations
deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .polycore import (
    ArityMismatch,
    ParseError,
    RealPolynomial,
    StarPolynomial,
    parse_star,
    real_variable_names,
)


class FracAlgError(ValueError):
    pass


class ConstantDenominator(FracAlgError):
    pass


class BasisMismatch(FracAlgError):
    pass


class BasisEntry:
    """One denominator generator: f = a + i*b with norm n = a^2 + b^2.

    ``f`` is None for bases that do not come from complex polynomials, such
    as restrictions to a line.
    """

    __slots__ = ("f", "a", "b", "n")

    def __init__(self, f, a, b):
        self.f = f
        self.a = a
        self.b = b
        self.n = a * a + b * b

    def __repr__(self):
        return f"BasisEntry(a={self.a}, b={self.b})"


class DenominatorBasis:
    """Ordered list of denominator entries over a fixed real variable tuple."""

    def __init__(self, variables, entries):
        self.variables = tuple(variables)
        self.entries = tuple(entries)
        for e in self.entries:
            if e.n.variables != self.variables:
                raise ArityMismatch("basis entry variables disagree")

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return (isinstance(other, DenominatorBasis)
                and self.variables == other.variables
                and len(self.entries) == len(other.entries)
                and all(p.a == q.a and p.b == q.b for p, q in zip(self.entries, other.entries)))

    def __hash__(self):
        return hash((self.variables, tuple((e.a, e.b) for e in self.entries)))


class FractionElement:
    """numerator / prod n_j^{exponents[j]} over a DenominatorBasis."""

    __slots__ = ("basis", "numerator", "exponents")

    def __init__(self, basis, numerator, exponents=None):
        if numerator.variables != basis.variables:
            raise ArityMismatch("numerator variables do not match the basis")
        exponents = tuple(int(e) for e in (exponents or (0,) * len(basis)))
        if len(exponents) != len(basis):
            raise ArityMismatch("one exponent per basis entry required")
        if any(e < 0 for e in exponents):
            raise FracAlgError("denominator exponents must be nonnegative")
        numerator, exponents = self._canonical(basis, numerator, exponents)
        self.basis = basis
        self.numerator = numerator
        self.exponents = exponents

    @staticmethod
    def _canonical(basis, numerator, exponents):
        if numerator.is_zero():
            return numerator, (0,) * len(basis)
        exponents = list(exponents)
        for j, entry in enumerate(basis.entries):
            while exponents[j] > 0:
                q = numerator.exact_quotient(entry.n)
                if q is None:
                    break
                numerator = q
                exponents[j] -= 1
        return numerator, tuple(exponents)

    @classmethod
    def from_polynomial(cls, basis, poly):
        return cls(basis, poly)

    @classmethod
    def constant(cls, basis, value):
        return cls(basis, RealPolynomial.constant(basis.variables, value))

    def is_zero(self):
        return self.numerator.is_zero()

    def is_polynomial(self):
        return all(e == 0 for e in self.exponents)

    def _check(self, other):
        if self.basis != other.basis:
            raise BasisMismatch("fraction elements live over different bases")

    def _lift(self, other):
        if isinstance(other, (int, Fraction)):
            return FractionElement.constant(self.basis, other)
        if isinstance(other, RealPolynomial):
            return FractionElement(self.basis, other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        exps = tuple(max(a, b) for a, b in zip(self.exponents, other.exponents))
        num = self.numerator * self._fill(exps, self.exponents) \
            + other.numerator * other._fill(exps, other.exponents)
        return FractionElement(self.basis, num, exps)

    __radd__ = __add__

    def _fill(self, target, have):
        out = RealPolynomial.constant(self.basis.variables, 1)
        for entry, t, h in zip(self.basis.entries, target, have):
            if t > h:
                out = out * entry.n ** (t - h)
        return out

    def __neg__(self):
        return FractionElement(self.basis, -self.numerator, self.exponents)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FractionElement(self.basis, self.numerator * other, self.exponents)
        other = self._lift(other)
        self._check(other)
        exps = tuple(a + b for a, b in zip(self.exponents, other.exponents))
        return FractionElement(self.basis, self.numerator * other.numerator, exps)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = FractionElement.constant(self.basis, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RealPolynomial)):
            other = self._lift(other)
        if not isinstance(other, FractionElement) or self.basis != other.basis:
            return False
        # cross-multiplied comparison; canonical forms may still differ by
        # factors the n_j-only cancellation cannot see
        exps = tuple(max(a, b) for a, b in zip(self.exponents, other.exponents))
        return self.numerator * self._fill(exps, self.exponents) \
            == other.numerator * other._fill(exps, other.exponents)

    def __hash__(self):
        return hash((self.basis, self.numerator, self.exponents))

    def eval(self, point):
        """Exact value at a point where every used denominator is nonzero."""
        num = self.numerator.eval(point)
        den = Fraction(1)
        for entry, e in zip(self.basis.entries, self.exponents):
            if e:
                nv = entry.n.eval(point)
                if nv == 0:
                    raise ZeroDivisionError("point lies on a denominator zero set")
                den *= nv ** e
        return num / den

    def __str__(self):
        if self.is_polynomial():
            return str(self.numerator)
        parts = []
        for entry, e in zip(self.basis.entries, self.exponents):
            if e:
                parts.append(f"({entry.n})^{e}" if e > 1 else f"({entry.n})")
        return f"({self.numerator}) / " + "*".join(parts)

    def __repr__(self):
        return f"FractionElement({self})"


class AlgebraDescriptor:
    """The data defining one fraction *-algebra: dimension, the f_j, and the
    real picture (a_j, b_j, n_j) of every denominator."""

    def __init__(self, d, f_list):
        self.d = int(d)
        self.f_list = tuple(f_list)
        names = real_variable_names(self.d)
        entries = []
        for f in self.f_list:
            a, b = f.ab_split()
            entries.append(BasisEntry(f, a, b))
        self.basis = DenominatorBasis(names, entries)

    @property
    def variables(self):
        return self.basis.variables

    @property
    def m(self):
        return len(self.f_list)

    def all_linear(self):
        """True when every f_j is a degree-1 polynomial in the z_j alone."""
        return all(f.holomorphic_only() and f.degree() == 1 for f in self.f_list)

    def __eq__(self, other):
        return (isinstance(other, AlgebraDescriptor)
                and self.d == other.d and self.f_list == other.f_list)


def make_algebra(f_list, d):
    """Build the descriptor; every f_j must be non-constant."""
    fs = []
    for f in f_list:
        if isinstance(f, str):
            f = parse_star(f, d)
        if not isinstance(f, StarPolynomial):
            raise TypeError("denominators must be star polynomials or text")
        if f.d != d:
            raise ArityMismatch(f"denominator has {f.d} complex variables, expected {d}")
        if f.is_constant():
            raise ConstantDenominator(f"constant denominator {f}")
        fs.append(f)
    return AlgebraDescriptor(d, fs)


def gh_functions(alg, j):
    """The bounded fibre coordinates of denominator j (1-based):
    g = (a^2 - b^2)/n and h = 2ab/n, with g^2 + h^2 = 1 on the domain."""
    if not 1 <= j <= alg.m:
        raise IndexError(f"denominator index {j} out of range 1..{alg.m}")
    entry = alg.basis.entries[j - 1]
    unit = tuple(1 if i == j - 1 else 0 for i in range(alg.m))
    g = FractionElement(alg.basis, entry.a * entry.a - entry.b * entry.b, unit)
    h = FractionElement(alg.basis, entry.a * entry.b * 2, unit)
    return g, h


def in_character_domain(alg, point):
    """True when no denominator vanishes: for each j, a_j != 0 or b_j != 0."""
    point = list(point)
    if len(point) != len(alg.variables):
        raise ArityMismatch(f"point needs {len(alg.variables)} coordinates")
    for entry in alg.basis.entries:
        if entry.a.eval(point) == 0 and entry.b.eval(point) == 0:
            return False
    return True


def frac_add(u, v):
    return u + v


def frac_mul(u, v):
    return u * v


def serialize_descriptor(alg):
    """Text form: header d=<k>, then one denominator per line."""
    lines = [f"d={alg.d}"]
    lines.extend(str(f) for f in alg.f_list)
    return "\n".join(lines) + "\n"


def parse_descriptor(text):
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), start=1)]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0][1].replace(" ", "").startswith("d="):
        raise FracAlgError("descriptor must start with a line d=<count>")
    try:
        d = int(lines[0][1].split("=", 1)[1].strip())
    except ValueError as exc:
        raise FracAlgError(f"bad dimension line {lines[0][1]!r}") from exc
    if d < 1:
        raise FracAlgError("dimension must be at least 1")
    if len(lines) == 1:
        raise FracAlgError("descriptor lists no denominators")
    fs = []
    for no, ln in lines[1:]:
        try:
            fs.append(parse_star(ln, d))
        except ParseError as err:
            raise FracAlgError(f"line {no}: {err}") from None
    return make_algebra(fs, d)


def single_norm_basis():
    """The basis with the single entry f = z, n = x^2 + y^2.

    This is the denominator structure shared by the plane-minus-origin
    algebra, its bounded subalgebra and the certification pipelines.
    """
    f = StarPolynomial.z(1, 1)
    a, b = f.ab_split()
    return DenominatorBasis(real_variable_names(1), [BasisEntry(f, a, b)])

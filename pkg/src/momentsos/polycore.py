"""Exact sparse polynomial arithmetic over the rationals and Gaussian rationals.

Two polynomial flavours live here:

* ``StarPolynomial`` -- complex polynomials in z_1..z_d and their conjugates
  zb_1..zb_d, with the involution that conjugates coefficients and swaps each
  z_j with zb_j.  Negative exponents are allowed when the polynomial is
  created with ``laurent=True``.
* ``RealPolynomial`` -- polynomials with rational coefficients in an ordered
  tuple of named real variables.

Coefficients are ``fractions.Fraction`` / ``GaussianRational``; nothing in
this module ever touches floating point.  Monomials are exponent tuples, term
maps drop zero coefficients, and ``degree`` of the zero polynomial is
``NEG_INFINITY``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

NEG_INFINITY = float("-inf")   # degree of the zero polynomial


class PolynomialError(ValueError):
    pass


class ArityMismatch(PolynomialError):
    pass


class LaurentNotSupported(PolynomialError):
    pass


class ParseError(PolynomialError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at column {position + 1})")
        self.message = message
        self.position = position


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


class GaussianRational:
    """Element of Q(i): re + im*i with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def conj(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        """|c|^2 as an exact Fraction."""
        return self.re * self.re + self.im * self.im

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def is_real(self):
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            other = _gaussian(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = _gaussian(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_gaussian(other))

    def __rsub__(self, other):
        return _gaussian(other) + (-self)

    def __mul__(self, other):
        other = _gaussian(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _gaussian(other)
        n = other.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conj()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return _gaussian(other) / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = GR_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        ims = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if self.re == 0:
            return ims if self.im > 0 else "-" + ims
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{ims})"

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


def _gaussian(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x, 0)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")


GR_ZERO = GaussianRational(0, 0)
GR_ONE = GaussianRational(1, 0)
GR_I = GaussianRational(0, 1)


def grlex_key(mon):
    """Sort key for graded lexicographic monomial order."""
    return (sum(mon), mon)


def real_variable_names(d):
    """Canonical real coordinate names: (x, y) for d=1, else x1..xd, y1..yd."""
    if d == 1:
        return ("x", "y")
    return tuple(f"x{j}" for j in range(1, d + 1)) + tuple(f"y{j}" for j in range(1, d + 1))


def complex_variable_names(d):
    """Canonical complex coordinate names: (z, zb) for d=1, else z1.., zb1.."""
    if d == 1:
        return ("z", "zb")
    return tuple(f"z{j}" for j in range(1, d + 1)) + tuple(f"zb{j}" for j in range(1, d + 1))


# ---------------------------------------------------------------------------
# real polynomials
# ---------------------------------------------------------------------------

class RealPolynomial:
    """Sparse polynomial over Q in an ordered tuple of named variables.

    Treated as immutable; arithmetic returns fresh objects.  ``terms`` maps
    exponent tuples (aligned with ``variables``) to nonzero Fractions.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        variables = tuple(variables)
        clean = {}
        for mon, c in (terms or {}).items():
            mon = tuple(int(e) for e in mon)
            if len(mon) != len(variables):
                raise ArityMismatch(f"monomial {mon} does not fit {len(variables)} variables")
            if any(e < 0 for e in mon):
                raise LaurentNotSupported("negative exponent in real polynomial")
            c = clean.get(mon, Fraction(0)) + _as_fraction(c)
            if c == 0:
                clean.pop(mon, None)
            else:
                clean[mon] = c
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("RealPolynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, value):
        value = _as_fraction(value)
        if value == 0:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(tuple(variables)): value})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"unknown variable {name!r}")
        mon = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {mon: Fraction(1)})

    @classmethod
    def monomial(cls, variables, mon, coeff=1):
        return cls(variables, {tuple(mon): _as_fraction(coeff)})

    # -- basic queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self):
        if not self.terms:
            return NEG_INFINITY
        return max(sum(m) for m in self.terms)

    def degree_in(self, name):
        if not self.terms:
            return NEG_INFINITY
        i = self.variables.index(name)
        return max(m[i] for m in self.terms)

    def coefficient(self, mon):
        return self.terms.get(tuple(mon), Fraction(0))

    def leading(self):
        """(monomial, coefficient), maximal in graded lex order; None if zero."""
        if not self.terms:
            return None
        m = max(self.terms, key=grlex_key)
        return m, self.terms[m]

    def support(self):
        return set(self.terms)

    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.variables != other.variables:
            raise ArityMismatch(f"variable mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RealPolynomial.constant(self.variables, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return RealPolynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        p = RealPolynomial.zero(self.variables)
        object.__setattr__(p, "terms", {m: -c for m, c in self.terms.items()})
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RealPolynomial.constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if c == 0:
                return RealPolynomial.zero(self.variables)
            p = RealPolynomial.zero(self.variables)
            object.__setattr__(p, "terms", {m: v * c for m, v in self.terms.items()})
            return p
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return RealPolynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = RealPolynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.terms == RealPolynomial.constant(self.variables, other).terms
        return (isinstance(other, RealPolynomial)
                and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- evaluation and substitution ----------------------------------------

    def eval(self, point):
        """Exact evaluation at a sequence of Fractions, one per variable."""
        point = [_as_fraction(x) for x in point]
        if len(point) != len(self.variables):
            raise ArityMismatch(f"point has {len(point)} coordinates, expected {len(self.variables)}")
        total = Fraction(0)
        for mon, c in self.terms.items():
            v = c
            for x, e in zip(point, mon):
                if e:
                    v *= x ** e
            total += v
        return total

    def eval_float(self, point):
        total = 0.0
        for mon, c in self.terms.items():
            v = float(c)
            for x, e in zip(point, mon):
                if e:
                    v *= x ** e
            total += v
        return total

    def compose(self, images):
        """Substitute ``images[i]`` for variable i.

        Images may be anything with ring arithmetic (RealPolynomial,
        StarPolynomial, Fraction, GaussianRational); the result lives in the
        ring of the images.
        """
        if len(images) != len(self.variables):
            raise ArityMismatch("one image per variable required")
        total = None
        for mon, c in self.terms.items():
            term = None
            for img, e in zip(images, mon):
                if e == 0:
                    continue
                p = img ** e
                term = p if term is None else term * p
            piece = c if term is None else term * c
            total = piece if total is None else total + piece
        if total is None:
            return Fraction(0)
        return total

    def rename(self, new_variables):
        """Same exponent data over a different variable tuple of equal length."""
        new_variables = tuple(new_variables)
        if len(new_variables) != len(self.variables):
            raise ArityMismatch("variable count must match")
        return RealPolynomial(new_variables, dict(self.terms))

    def extend(self, new_variables):
        """Embed into a larger variable tuple; old variables must all appear."""
        new_variables = tuple(new_variables)
        pos = []
        for v in self.variables:
            if v not in new_variables:
                raise PolynomialError(f"variable {v!r} missing from extension")
            pos.append(new_variables.index(v))
        out = {}
        for mon, c in self.terms.items():
            big = [0] * len(new_variables)
            for p, e in zip(pos, mon):
                big[p] = e
            out[tuple(big)] = c
        return RealPolynomial(new_variables, out)

    def derivative(self, name):
        i = self.variables.index(name)
        out = {}
        for mon, c in self.terms.items():
            e = mon[i]
            if e == 0:
                continue
            m = list(mon)
            m[i] = e - 1
            out[tuple(m)] = c * e
        return RealPolynomial(self.variables, out)

    # -- structure ----------------------------------------------------------

    def homogeneous_components(self):
        """dict total_degree -> homogeneous part, zero parts omitted."""
        buckets = {}
        for mon, c in self.terms.items():
            buckets.setdefault(sum(mon), {})[mon] = c
        return {d: RealPolynomial(self.variables, t) for d, t in sorted(buckets.items())}

    def content(self):
        """Positive gcd of the coefficients, 0 for the zero polynomial."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_part(self):
        c = self.content()
        if c == 0:
            return self
        return self * (1 / c)

    def divmod_by(self, divisor):
        """Division with remainder by one polynomial, graded lex order.

        Cancels the leading term of the running remainder whenever the
        leading monomial of ``divisor`` divides it; other leading terms move
        to the final remainder.  Exact identity:
        self == quotient * divisor + remainder.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lm, lc = divisor.leading()
        q = {}
        rem = dict(self.terms)
        done = {}
        while rem:
            m = max(rem, key=grlex_key)
            c = rem.pop(m)
            if all(a >= b for a, b in zip(m, lm)):
                qm = tuple(a - b for a, b in zip(m, lm))
                qc = c / lc
                q[qm] = q.get(qm, Fraction(0)) + qc
                for dm, dc in divisor.terms.items():
                    if dm == lm:
                        continue
                    tm = tuple(a + b for a, b in zip(qm, dm))
                    nv = rem.get(tm, Fraction(0)) - qc * dc
                    if nv == 0:
                        rem.pop(tm, None)
                    else:
                        rem[tm] = nv
            else:
                done[m] = c
        return (RealPolynomial(self.variables, q), RealPolynomial(self.variables, done))

    def exact_quotient(self, divisor):
        """self / divisor when the division is exact, otherwise None."""
        q, r = self.divmod_by(divisor)
        return q if r.is_zero() else None

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return format_real(self)

    def __repr__(self):
        return f"RealPolynomial({self.variables!r}, {format_real(self)!r})"


# ---------------------------------------------------------------------------
# star polynomials
# ---------------------------------------------------------------------------

class StarPolynomial:
    """Complex polynomial in z_1..z_d, zb_1..zb_d with the conjugation star.

    Monomials are exponent tuples of length 2d, the first d slots for the
    z_j, the last d for the zb_j.  Coefficients are GaussianRationals.  The
    star swaps the two blocks and conjugates every coefficient, which is the
    involution induced by complex conjugation of functions on C^d.
    """

    __slots__ = ("d", "terms", "laurent")

    def __init__(self, d, terms=None, laurent=False):
        d = int(d)
        if d < 1:
            raise PolynomialError("need at least one complex variable")
        clean = {}
        for mon, c in (terms or {}).items():
            mon = tuple(int(e) for e in mon)
            if len(mon) != 2 * d:
                raise ArityMismatch(f"monomial {mon} does not fit 2*{d} exponent slots")
            if not laurent and any(e < 0 for e in mon):
                raise LaurentNotSupported("negative exponent without laurent=True")
            c = clean.get(mon, GR_ZERO) + _gaussian(c)
            if c.is_zero():
                clean.pop(mon, None)
            else:
                clean[mon] = c
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "laurent", bool(laurent))

    def __setattr__(self, name, value):
        raise AttributeError("StarPolynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, d, laurent=False):
        return cls(d, {}, laurent)

    @classmethod
    def constant(cls, d, value, laurent=False):
        value = _gaussian(value)
        if value.is_zero():
            return cls.zero(d, laurent)
        return cls(d, {(0,) * (2 * d): value}, laurent)

    @classmethod
    def z(cls, d, j, laurent=False):
        """The coordinate z_j, 1-based."""
        if not 1 <= j <= d:
            raise PolynomialError(f"z index {j} out of range 1..{d}")
        mon = [0] * (2 * d)
        mon[j - 1] = 1
        return cls(d, {tuple(mon): GR_ONE}, laurent)

    @classmethod
    def zb(cls, d, j, laurent=False):
        """The conjugate coordinate zb_j, 1-based."""
        if not 1 <= j <= d:
            raise PolynomialError(f"zb index {j} out of range 1..{d}")
        mon = [0] * (2 * d)
        mon[d + j - 1] = 1
        return cls(d, {tuple(mon): GR_ONE}, laurent)

    # -- basic queries ------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in m) for m in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * (2 * self.d), GR_ZERO)

    def degree(self):
        if not self.terms:
            return NEG_INFINITY
        return max(sum(m) for m in self.terms)

    def coefficient(self, mon):
        return self.terms.get(tuple(mon), GR_ZERO)

    def holomorphic_only(self):
        """True when no zb_j occurs, i.e. the polynomial lives in C[z_1..z_d]."""
        return all(all(e == 0 for e in m[self.d:]) for m in self.terms)

    def variables_used(self):
        """Set of 1-based coordinate indices appearing with nonzero exponent."""
        used = set()
        for m in self.terms:
            for j in range(self.d):
                if m[j] != 0 or m[self.d + j] != 0:
                    used.add(j + 1)
        return used

    # -- star structure -----------------------------------------------------

    def star(self):
        out = {}
        for mon, c in self.terms.items():
            swapped = mon[self.d:] + mon[:self.d]
            out[swapped] = c.conj()
        p = StarPolynomial.zero(self.d, self.laurent)
        object.__setattr__(p, "terms", out)
        return p

    def is_hermitean(self):
        return self.terms == self.star().terms

    def hermitean_split(self):
        """p = h1 + i*h2 with both parts hermitean; returns (h1, h2)."""
        ps = self.star()
        half = GaussianRational(Fraction(1, 2), 0)
        mihalf = GaussianRational(0, Fraction(-1, 2))
        h1 = (self + ps) * half
        h2 = (self - ps) * mihalf
        return h1, h2

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.d != other.d:
            raise ArityMismatch(f"complex dimension mismatch: {self.d} vs {other.d}")

    def _lift(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return StarPolynomial.constant(self.d, other, self.laurent)
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, GR_ZERO) + c
        return StarPolynomial(self.d, out, self.laurent or other.laurent)

    __radd__ = __add__

    def __neg__(self):
        p = StarPolynomial.zero(self.d, self.laurent)
        object.__setattr__(p, "terms", {m: -c for m, c in self.terms.items()})
        return p

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = _gaussian(other)
            if c.is_zero():
                return StarPolynomial.zero(self.d, self.laurent)
            p = StarPolynomial.zero(self.d, self.laurent)
            object.__setattr__(p, "terms", {m: v * c for m, v in self.terms.items()})
            return p
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, GR_ZERO) + c1 * c2
                if v.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = v
        return StarPolynomial(self.d, out, self.laurent or other.laurent)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = StarPolynomial.constant(self.d, 1, self.laurent)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = StarPolynomial.constant(self.d, other, self.laurent)
        return (isinstance(other, StarPolynomial)
                and self.d == other.d
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    # -- evaluation ---------------------------------------------------------

    def eval_character(self, zs):
        """Evaluate at a point of C^d, substituting zb_j = conj(z_j).

        ``zs`` is a sequence of d GaussianRationals.  Laurent exponents are
        fine as long as the needed coordinates are nonzero.
        """
        zs = [_gaussian(z) for z in zs]
        if len(zs) != self.d:
            raise ArityMismatch(f"need {self.d} coordinates")
        total = GR_ZERO
        for mon, c in self.terms.items():
            v = c
            for j, z in enumerate(zs):
                for base, e in ((z, mon[j]), (z.conj(), mon[self.d + j])):
                    if e > 0:
                        v = v * base ** e
                    elif e < 0:
                        if base.is_zero():
                            raise ZeroDivisionError(f"coordinate {j + 1} vanishes under a negative exponent")
                        v = v * (GR_ONE / base) ** (-e)
            total = total + v
        return total

    # -- passage to real coordinates ----------------------------------------

    def realify(self):
        """Substitute z_j = x_j + i*y_j, zb_j = x_j - i*y_j.

        Returns (re, im): two RealPolynomials in the canonical real variable
        names with original == re + i*im as functions on C^d.  Laurent
        exponents are rejected; clear denominators first.
        """
        if any(e < 0 for m in self.terms for e in m):
            raise LaurentNotSupported("cannot realify a Laurent polynomial")
        names = real_variable_names(self.d)
        n = len(names)
        re_terms = {}
        im_terms = {}

        def xy_pow(j, sign, e, _cache={}):
            # (x_j + sign*i*y_j)^e as a monomial -> coefficient map
            key = (self.d, j, sign, e)
            if key not in _cache:
                base = {}
                mx = [0] * n
                mx[j] = 1
                base[tuple(mx)] = GR_ONE
                my = [0] * n
                my[self.d + j] = 1
                base[tuple(my)] = GaussianRational(0, sign)
                acc = {(0,) * n: GR_ONE}
                for _ in range(e):
                    nxt = {}
                    for m1, c1 in acc.items():
                        for m2, c2 in base.items():
                            m = tuple(a + b for a, b in zip(m1, m2))
                            v = nxt.get(m, GR_ZERO) + c1 * c2
                            if v.is_zero():
                                nxt.pop(m, None)
                            else:
                                nxt[m] = v
                    acc = nxt
                _cache[key] = acc
            return _cache[key]

        for mon, c in self.terms.items():
            acc = {(0,) * n: c}
            for j in range(self.d):
                for sign, e in ((1, mon[j]), (-1, mon[self.d + j])):
                    if e == 0:
                        continue
                    fac = xy_pow(j, sign, e)
                    nxt = {}
                    for m1, c1 in acc.items():
                        for m2, c2 in fac.items():
                            m = tuple(a + b for a, b in zip(m1, m2))
                            v = nxt.get(m, GR_ZERO) + c1 * c2
                            if v.is_zero():
                                nxt.pop(m, None)
                            else:
                                nxt[m] = v
                    acc = nxt
            for m, v in acc.items():
                if v.re != 0:
                    re_terms[m] = re_terms.get(m, Fraction(0)) + v.re
                if v.im != 0:
                    im_terms[m] = im_terms.get(m, Fraction(0)) + v.im
        return (RealPolynomial(names, re_terms), RealPolynomial(names, im_terms))

    def ab_split(self):
        """Real and imaginary parts as functions on C^d.

        For f = a + i*b with a, b real-valued this returns (a, b) as
        RealPolynomials in the canonical real coordinates.
        """
        return self.realify()

    # -- printing -----------------------------------------------------------

    def __str__(self):
        return format_star(self)

    def __repr__(self):
        return f"StarPolynomial(d={self.d}, {format_star(self)!r})"


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _mon_str(names, mon):
    parts = []
    for v, e in zip(names, mon):
        if e == 0:
            continue
        if e == 1:
            parts.append(v)
        else:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_real(poly):
    """Canonical text form: graded lex descending, explicit * and ^."""
    if not poly.terms:
        return "0"
    pieces = []
    for mon in sorted(poly.terms, key=grlex_key, reverse=True):
        c = poly.terms[mon]
        ms = _mon_str(poly.variables, mon)
        if not ms:
            body = str(abs(c))
        elif abs(c) == 1:
            body = ms
        else:
            body = f"{abs(c)}*{ms}"
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


def format_star(poly):
    """Canonical text form for star polynomials.

    Real and purely imaginary coefficients print with an explicit sign;
    properly complex ones are wrapped as (a+b*i)*monomial.
    """
    if not poly.terms:
        return "0"
    names = complex_variable_names(poly.d)
    pieces = []
    for mon in sorted(poly.terms, key=grlex_key, reverse=True):
        c = poly.terms[mon]
        ms = _mon_str(names, mon)
        neg = False
        if c.im == 0:
            mag = abs(c.re)
            neg = c.re < 0
            if not ms:
                body = str(mag)
            elif mag == 1:
                body = ms
            else:
                body = f"{mag}*{ms}"
        elif c.re == 0:
            mag = abs(c.im)
            neg = c.im < 0
            istr = "i" if mag == 1 else f"{mag}*i"
            body = istr if not ms else f"{istr}*{ms}"
        else:
            body = str(c) if not ms else f"{c}*{ms}"
        if not pieces:
            pieces.append(body if not neg else "-" + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    "|".join(f"(?P<{k}>{p})" for k, p in (
        ("number", r"\d+"),
        ("name", r"[A-Za-z][A-Za-z0-9]*"),
        ("op", r"[-+*/^()]"),
        ("space", r"\s+"),
    ))
)


def _tokenize(text):
    tokens = []
    pos = 0
    for m in _TOKEN_RE.finditer(text):
        if m.start() != pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        if m.lastgroup != "space":
            tokens.append((m.lastgroup, m.group(), m.start()))
    if pos != len(text):
        raise ParseError(f"unexpected character {text[pos]!r}", pos)
    return tokens


class _Parser:
    """Recursive descent over +, -, *, ^, parentheses and rational literals.

    ``/`` is only allowed between integer literals, so 3/4*x parses and x/2
    does not; the printers only ever emit the accepted form.
    """

    def __init__(self, text, make_const, make_var):
        self.tokens = _tokenize(text)
        self.i = 0
        self.end = len(text)
        self.make_const = make_const
        self.make_var = make_var

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, self.end)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        p = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ParseError(f"trailing input {val!r}", pos)
        return p

    def expr(self):
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        p = self.term()
        if negate:
            p = -p
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p - q if val == "-" else p + q
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            else:
                return p

    def factor(self):
        p = self.base()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind == "op" and val == "-":
                raise ParseError("negative exponents are not accepted in input", pos)
            if kind != "number":
                raise ParseError("expected an integer exponent", pos)
            return p ** int(val)
        return p

    def base(self):
        kind, val, pos = self.take()
        if kind == "number":
            num = int(val)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3, p3 = self.take()
                if k3 != "number":
                    raise ParseError("expected an integer denominator", p3)
                if int(v3) == 0:
                    raise ParseError("zero denominator", p3)
                return self.make_const(Fraction(num, int(v3)))
            return self.make_const(Fraction(num))
        if kind == "name":
            return self.make_var(val, pos)
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val, pos = self.take()
            if kind != "op" or val != ")":
                raise ParseError("expected ')'", pos)
            return p
        if kind == "op" and val == "-":
            return -self.factor()
        if kind == "op" and val == "+":
            return self.factor()
        raise ParseError("expected a number, variable or parenthesis", pos)


def parse_real(text, variables):
    """Parse a real polynomial over the given ordered variable names."""
    variables = tuple(variables)

    def const(c):
        return RealPolynomial.constant(variables, c)

    def var(name, pos):
        if name == "i":
            raise ParseError("imaginary unit not allowed in a real polynomial", pos)
        if name not in variables:
            raise ParseError(f"unknown variable {name!r}", pos)
        return RealPolynomial.variable(variables, name)

    return _Parser(text, const, var).parse()


def parse_star(text, d):
    """Parse a complex polynomial in z_1..z_d, zb_1..zb_d and i.

    For d = 1 the aliases z and zb name the single coordinate pair; for any d
    the indexed names z1, zb1, .. are accepted.
    """
    d = int(d)

    def const(c):
        return StarPolynomial.constant(d, c)

    def var(name, pos):
        if name == "i":
            return StarPolynomial.constant(d, GR_I)
        if d == 1 and name == "z":
            return StarPolynomial.z(1, 1)
        if d == 1 and name == "zb":
            return StarPolynomial.zb(1, 1)
        if name.startswith("zb"):
            tail = name[2:]
            if tail.isdigit():
                j = int(tail)
                if 1 <= j <= d:
                    return StarPolynomial.zb(d, j)
                raise ParseError(f"index out of range in {name!r}", pos)
        elif name.startswith("z"):
            tail = name[1:]
            if tail.isdigit():
                j = int(tail)
                if 1 <= j <= d:
                    return StarPolynomial.z(d, j)
                raise ParseError(f"index out of range in {name!r}", pos)
        raise ParseError(f"unknown variable {name!r}", pos)

    return _Parser(text, const, var).parse()

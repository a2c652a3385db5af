"""Exact real-root tools for polynomials in one variable.

Sturm chains decide how many real roots live in an interval, Yun's
algorithm splits off square factors, and together they decide whether a
polynomial is nonnegative on the whole line: even degree, positive leading
coefficient and no real root of odd multiplicity.  When a polynomial is
negative somewhere, a rational point witnessing that is produced by a small
integer scan followed by Sturm isolation and bisection.
"""

from __future__ import annotations

from fractions import Fraction

from .polycore import RealPolynomial


class UnivariateError(ValueError):
    pass


def _check_univariate(p):
    if len(p.variables) != 1:
        raise UnivariateError(f"expected one variable, got {p.variables}")


def leading_coefficient(p):
    if p.is_zero():
        return Fraction(0)
    _, lc = p.leading()
    return lc


def poly_gcd(p, q):
    """Monic greatest common divisor, zero if both inputs are zero."""
    _check_univariate(p)
    while not q.is_zero():
        _, r = p.divmod_by(q)
        p, q = q, r
    if p.is_zero():
        return p
    return p * (1 / leading_coefficient(p))


def derivative(p):
    return p.derivative(p.variables[0])


def square_free_decomposition(p):
    """Yun decomposition: returns (c, parts) with p = c * prod A_i^i.

    The A_i are monic, square-free and pairwise coprime; parts lists
    (A_i, i) for the nonconstant A_i only.
    """
    _check_univariate(p)
    if p.is_zero():
        raise UnivariateError("zero polynomial has no square-free decomposition")
    lc = leading_coefficient(p)
    f = p * (1 / lc)
    if f.degree() == 0:
        return lc, []
    fp = derivative(f)
    a0 = poly_gcd(f, fp)
    b = f.exact_quotient(a0)
    c = fp.exact_quotient(a0)
    d = c - derivative(b)
    parts = []
    i = 1
    while b.degree() > 0:
        a = poly_gcd(b, d)
        if a.degree() > 0:
            parts.append((a, i))
        b = b.exact_quotient(a)
        c = d.exact_quotient(a)
        d = c - derivative(b)
        i += 1
    return lc, parts


def square_free_part(p):
    """Monic product of the distinct irreducible factors."""
    _, parts = square_free_decomposition(p)
    out = RealPolynomial.constant(p.variables, 1)
    for a, _ in parts:
        out = out * a
    return out


def even_odd_split(p):
    """Write p = lc * E^2 * R with R the monic product of the factors of
    odd multiplicity; returns (lc, E, R)."""
    lc, parts = square_free_decomposition(p)
    one = RealPolynomial.constant(p.variables, 1)
    e, r = one, one
    for a, i in parts:
        e = e * a ** (i // 2)
        if i % 2 == 1:
            r = r * a
    return lc, e, r


# -- Sturm chains -----------------------------------------------------------

def sturm_chain(p):
    """Sturm sequence of p, each remainder scaled primitive (sign kept)."""
    _check_univariate(p)
    chain = [p]
    d = derivative(p)
    if not d.is_zero():
        chain.append(d)
        while True:
            _, r = chain[-2].divmod_by(chain[-1])
            if r.is_zero():
                break
            chain.append((-r).primitive_part())
    return chain


def _sign(value):
    return (value > 0) - (value < 0)


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _chain_signs_at(chain, x):
    return [_sign(q.eval([x])) for q in chain]


def _chain_signs_at_infinity(chain, positive):
    out = []
    for q in chain:
        lc = leading_coefficient(q)
        s = _sign(lc)
        if not positive and q.degree() % 2 == 1:
            s = -s
        out.append(s)
    return out


def root_count(p, lo=None, hi=None):
    """Number of distinct real roots in (lo, hi]; None means unbounded.

    Endpoints must not be roots of p when given.
    """
    _check_univariate(p)
    if p.is_zero():
        raise UnivariateError("zero polynomial has infinitely many roots")
    sf = square_free_part(p)
    if sf.degree() == 0:
        return 0
    chain = sturm_chain(sf)
    lo_signs = _chain_signs_at_infinity(chain, False) if lo is None \
        else _chain_signs_at(chain, Fraction(lo))
    hi_signs = _chain_signs_at_infinity(chain, True) if hi is None \
        else _chain_signs_at(chain, Fraction(hi))
    return _variations(lo_signs) - _variations(hi_signs)


def cauchy_bound(p):
    """All real roots lie in (-M, M)."""
    _check_univariate(p)
    if p.is_zero() or p.degree() == 0:
        return Fraction(1)
    lc = abs(leading_coefficient(p))
    deg = p.degree()
    worst = Fraction(0)
    for mon, c in p.terms.items():
        if mon[0] != deg:
            worst = max(worst, abs(c))
    return 1 + worst / lc


def is_psd(p):
    """True when p >= 0 on the whole real line."""
    _check_univariate(p)
    if p.is_zero():
        return True
    if p.is_constant():
        return p.constant_value() >= 0
    if p.degree() % 2 == 1 or leading_coefficient(p) < 0:
        return False
    _, _, odd = even_odd_split(p)
    if odd.degree() == 0:
        return True
    return root_count(odd) == 0


# -- negative witnesses -----------------------------------------------------

_SCAN = [Fraction(0)]
for _k in range(1, 9):
    _SCAN.extend([Fraction(_k), Fraction(-_k)])


def find_negative_point(p):
    """A rational t with p(t) < 0, or None when p is psd."""
    _check_univariate(p)
    if p.is_zero():
        return None
    for t in _SCAN:
        if p.eval([t]) < 0:
            return t
    if p.is_constant():
        return None
    lc = leading_coefficient(p)
    bound = cauchy_bound(p)
    far = Fraction(int(bound) + 1)
    if lc < 0:
        return far
    if p.degree() % 2 == 1:
        return -far
    _, _, odd = even_odd_split(p)
    if odd.degree() == 0 or root_count(odd) == 0:
        return None
    return _witness_near_sign_change(p, odd)


def _witness_near_sign_change(p, odd):
    """p changes sign at every root of the square-free polynomial odd;
    isolate one such root and probe beside it."""
    chain = sturm_chain(odd)

    def count(a, b):
        return _variations(_chain_signs_at(chain, a)) \
            - _variations(_chain_signs_at(chain, b))

    bound = cauchy_bound(odd)
    lo, hi = -bound - 1, bound + 1
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        k = count(a, b)
        if k == 0:
            continue
        if k == 1:
            witness = _probe_interval(p, odd, a, b)
            if witness is not None:
                return witness
            continue
        mid = (a + b) / 2
        if odd.eval([mid]) == 0:
            witness = _probe_rational_root(p, mid)
            if witness is not None:
                return witness
            # fall through on both sides of the root
            eps = _separate(odd, mid)
            stack.append((a, mid - eps))
            stack.append((mid + eps, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    return None


def _separate(odd, root):
    """Dyadic eps with no further root of odd in [root-eps, root+eps]."""
    chain = sturm_chain(odd)
    eps = Fraction(1, 2)
    while True:
        a, b = root - eps, root + eps
        if odd.eval([a]) != 0 and odd.eval([b]) != 0:
            inside = _variations(_chain_signs_at(chain, a)) \
                - _variations(_chain_signs_at(chain, b))
            if inside == 1:
                return eps
        eps = eps / 2


def _probe_rational_root(p, root):
    """p vanishes to odd order at root; test shrinking offsets."""
    eps = Fraction(1, 2)
    for _ in range(512):
        for t in (root - eps, root + eps):
            if p.eval([t]) < 0:
                return t
        eps = eps / 2
    return None


def _probe_interval(p, odd, a, b):
    """Exactly one root of odd lies in (a, b]; shrink around it until the
    sign of p at an endpoint goes negative."""
    sf = square_free_part(p)
    chain = sturm_chain(sf)

    def p_roots(x, y):
        return _variations(_chain_signs_at(chain, x)) \
            - _variations(_chain_signs_at(chain, y))

    for _ in range(512):
        if odd.eval([a]) == 0:
            return _probe_rational_root(p, a)
        if odd.eval([b]) == 0:
            return _probe_rational_root(p, b)
        if p.eval([a]) < 0:
            return a
        if p.eval([b]) < 0:
            return b
        mid = (a + b) / 2
        if odd.eval([mid]) == 0:
            return _probe_rational_root(p, mid)
        if p_roots(a, mid) >= 1:
            b = mid
        else:
            a = mid
    return None

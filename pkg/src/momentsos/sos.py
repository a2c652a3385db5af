"""Sum-of-squares certification with exact rational output.

The central routine poses a Gram-matrix problem over the half-Newton-
polytope basis of the target, solves the coefficient constraints exactly
over the rationals, picks an interior candidate with a small numeric
semidefinite solve, rounds the free parameters back into the exact affine
slice, and verifies positive semidefiniteness with an exact LDL
factorization.  Boundary instances go through facial reduction on
rationalized kernel vectors; infeasible instances are only reported with a
separating functional that is itself verified exactly.  On top of this sit
the univariate fast path, the norm-multiplier search, fraction targets over
x^2+y^2, and the ideal-quotient search on the cylinder x^2+y^2 = 1.

Every certificate re-expands to the target with zero residual; numeric
data never enters a verdict without an exact check behind it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .polycore import RealPolynomial, grlex_key
from .fracalg import FractionElement, single_norm_basis
from .ratlin import (
    hull_contains,
    nullspace,
    rationalize_vector,
    solve_affine,
    sym_ldl,
)
from .univariate import (
    even_odd_split,
    find_negative_point,
    is_psd,
)


class SOSError(ValueError):
    pass


class ZeroPolynomial(SOSError):
    pass


class NotDivisible(SOSError):
    pass


class BadWitness(SOSError):
    pass


class NotPSD(SOSError):
    """Raised when a certificate is requested for a non-psd input; carries
    a rational point and the negative value there when available."""

    def __init__(self, message, point=None, value=None):
        super().__init__(message)
        self.point = point
        self.value = value


# -- result types -----------------------------------------------------------

@dataclass
class GramProblem:
    target: RealPolynomial
    basis: tuple               # monomial exponent tuples
    ideal: RealPolynomial = None

    def __post_init__(self):
        self.basis = tuple(tuple(m) for m in self.basis)


@dataclass
class PSDRationalMatrix:
    entries: list              # symmetric rational matrix
    ldl: object                # LDLResult with psd=True


@dataclass
class GramSolution:
    matrix: PSDRationalMatrix
    basis: tuple
    variables: tuple

    def squares(self):
        return extract_squares(self.matrix, self.basis, self.variables)


@dataclass
class Infeasible:
    functional: dict           # monomial -> rational value of the separating functional
    value: Fraction            # functional applied to the target, negative
    note: str = ""


@dataclass
class Indeterminate:
    note: str = ""


@dataclass
class Exhausted:
    cap: int
    trail: tuple = ()
    note: str = ""


@dataclass
class NotPSDWitness:
    point: tuple
    value: Fraction


@dataclass
class SOSCertificate:
    """Exact identity multiplier^m * target = sum(squares^2) + cofactor*ideal.

    For the fraction and semigroup kinds the identity is target =
    sum(squares^2) in the respective algebra and the multiplier fields only
    record how the certificate was found.
    """

    target: object
    squares: tuple
    multiplier: object = None
    multiplier_exponent: int = 0
    ideal: object = None
    ideal_cofactor: object = None
    kind: str = "polynomial"
    semigroup: object = None


_ROUND_DENOMINATORS = (2 ** 8, 2 ** 16, 2 ** 32)
_KERNEL_DENOMINATORS = (64, 2 ** 8, 2 ** 16)
_PARAM_BOUND = 1e4
_KERNEL_BAND = 1e-6


def _boundary_band(tolerance):
    return max(100.0 * float(tolerance), 1e-7)


# -- integer square decompositions ------------------------------------------

def _two_square_prime(p):
    """p = 2 or a prime congruent 1 mod 4; returns (a, b) with a^2+b^2 = p."""
    if p == 2:
        return (1, 1)
    t = None
    for q in itertools.count(2):
        cand = pow(q, (p - 1) // 4, p)
        if (cand * cand) % p == p - 1:
            t = cand
            break
    a, b = p, t
    bound = isqrt(p)
    while b > bound:
        a, b = b, a % b
    y2 = p - b * b
    y = isqrt(y2)
    if y * y != y2:
        raise SOSError(f"two-square reduction failed for {p}")
    return (max(b, y), min(b, y))


def _three_square_brute(n):
    for a in range(isqrt(n), -1, -1):
        r1 = n - a * a
        for b in range(isqrt(r1), -1, -1):
            r2 = r1 - b * b
            c = isqrt(r2)
            if c * c == r2:
                return (a, b, c)
    return None


def _three_square(n):
    """n >= 0 with n not of the form 4^a(8b+7); three squares."""
    from sympy import isprime

    if n == 0:
        return (0, 0, 0)
    r = isqrt(n)
    if r * r == n:
        return (r, 0, 0)
    if n <= 10000:
        out = _three_square_brute(n)
        if out is None:
            raise SOSError(f"{n} is not a sum of three squares")
        return out
    if n % 4 in (1, 2):
        x = isqrt(n)
        if (n - x * x) % 4 != 1:
            x -= 1
        while x >= 0:
            p = n - x * x
            if p == 1:
                return (x, 1, 0)
            if p == 2:
                return (x, 1, 1)
            if p % 4 == 1 and isprime(p):
                a, b = _two_square_prime(p)
                return (x, a, b)
            x -= 2
    elif n % 8 == 3:
        x = isqrt(n)
        if x % 2 == 0:
            x -= 1
        while x >= 1:
            p = (n - x * x) // 2
            if p == 1:
                return (x, 1, 1)
            if p % 4 == 1 and isprime(p):
                a, b = _two_square_prime(p)
                return (x, a + b, abs(a - b))
            x -= 2
    out = _three_square_brute(n)
    if out is None:
        raise SOSError(f"{n} is not a sum of three squares")
    return out


def four_square_decomposition(n):
    """Nonzero squares summing to n, deterministic."""
    n = int(n)
    if n < 0:
        raise SOSError("negative integers are not sums of squares")
    if n == 0:
        return ()
    shift = 1
    while n % 4 == 0:
        n //= 4
        shift *= 2
    if n % 8 == 7:
        parts = (2,) + _three_square(n - 4)
    else:
        parts = _three_square(n)
    return tuple(sorted((p * shift for p in parts if p), reverse=True))


def rational_square_parts(q):
    """Positive rationals f_i with sum f_i^2 = q (q > 0); at most four."""
    q = Fraction(q)
    if q < 0:
        raise SOSError("negative scalar is not a sum of squares")
    if q == 0:
        return ()
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return (Fraction(rn, rd),)
    return tuple(Fraction(a, den) for a in four_square_decomposition(num * den))


# -- Newton polytope basis --------------------------------------------------

def newton_basis(p):
    """Monomials whose doubles lie in the convex hull of the support of p."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no Gram basis")
    support = [list(m) for m in p.terms]
    nv = len(p.variables)
    maxes = [max(s[i] for s in support) for i in range(nv)]
    out = []
    for alpha in itertools.product(*[range(m // 2 + 1) for m in maxes]):
        if hull_contains(support, [2 * a for a in alpha]):
            out.append(alpha)
    return tuple(sorted(out, key=grlex_key))


# -- normal forms mod a single ideal generator ------------------------------

def circle_ideal(variables):
    """1 - x^2 - y^2 in the given ring (must contain x and y)."""
    ix = variables.index("x")
    iy = variables.index("y")
    nv = len(variables)
    terms = {(0,) * nv: Fraction(1)}
    mx = tuple(2 if i == ix else 0 for i in range(nv))
    my = tuple(2 if i == iy else 0 for i in range(nv))
    terms[mx] = Fraction(-1)
    terms[my] = Fraction(-1)
    return RealPolynomial(variables, terms)


def _is_circle_ideal(ideal):
    try:
        return ideal == circle_ideal(ideal.variables)
    except ValueError:
        return False


def cylinder_normal(p):
    """Reduce y^2 -> 1 - x^2 until the y-degree is at most one."""
    vars_ = p.variables
    iy = vars_.index("y")
    ix = vars_.index("x")
    nv = len(vars_)
    one_minus_x2 = RealPolynomial(vars_, {
        (0,) * nv: Fraction(1),
        tuple(2 if i == ix else 0 for i in range(nv)): Fraction(-1),
    })
    out = RealPolynomial.zero(vars_)
    for mon, c in p.terms.items():
        half, rest = divmod(mon[iy], 2)
        base = tuple(rest if i == iy else e for i, e in enumerate(mon))
        term = RealPolynomial.monomial(vars_, base, c)
        if half:
            term = term * one_minus_x2 ** half
        out = out + term
    return out


def _reduce_mod(poly, ideal):
    if ideal is None:
        return poly
    if _is_circle_ideal(ideal):
        return cylinder_normal(poly)
    _, rem = poly.divmod_by(ideal)
    return rem


# -- Gram assembly ----------------------------------------------------------

def _assemble(prob):
    """Affine system A g = rhs for the upper-triangle Gram entries."""
    variables = prob.target.variables
    n = len(prob.basis)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    products = []
    for i, j in pairs:
        mon = tuple(a + b for a, b in zip(prob.basis[i], prob.basis[j]))
        poly = RealPolynomial.monomial(variables, mon)
        products.append(_reduce_mod(poly, prob.ideal).terms)
    target_nf = _reduce_mod(prob.target, prob.ideal)
    mons = set(target_nf.terms)
    for terms in products:
        mons.update(terms)
    mons = sorted(mons, key=grlex_key, reverse=True)
    index = {m: r for r, m in enumerate(mons)}
    matrix = [[Fraction(0)] * len(pairs) for _ in mons]
    for col, ((i, j), terms) in enumerate(zip(pairs, products)):
        mult = 1 if i == j else 2
        for mon, c in terms.items():
            matrix[index[mon]][col] += mult * c
    rhs = [target_nf.terms.get(m, Fraction(0)) for m in mons]
    return pairs, products, mons, matrix, rhs, target_nf


def _matrix_from_pairs(values, pairs, n):
    G = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in zip(pairs, values):
        G[i][j] = v
        G[j][i] = v
    return G


def _np_matrix(G):
    return np.array([[float(x) for x in row] for row in G], dtype=float)


def _add_scaled(G0, Ns, tvec):
    n = len(G0)
    out = [row[:] for row in G0]
    for N, t in zip(Ns, tvec):
        if t == 0:
            continue
        for i in range(n):
            row = N[i]
            orow = out[i]
            for j in range(n):
                if row[j]:
                    orow[j] += t * row[j]
    return out


def _integerize(vec):
    """Scale a rational vector to coprime integers, first nonzero positive."""
    den = 1
    for v in vec:
        den = den * v.denominator // _gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = _gcd(g, abs(v))
    if g == 0:
        return None
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _symmetrized(mat):
    return (mat + mat.T) / 2.0


def _quiet_solve(problem, cp):
    # inaccurate-solution warnings are useless here; every numeric answer is
    # re-checked with exact arithmetic before it can influence a verdict
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        problem.solve(solver=cp.CLARABEL)


def _solve_max_lambda(G0n, Nns, Qn):
    """Numeric max-lambda-min over the affine slice, None on solver trouble.

    When Qn is given the semidefinite constraint is placed on the
    compression Qn^T G Qn; the parameters still range over the full slice.
    """
    import cvxpy as cp

    if Qn is not None:
        G0n = _symmetrized(Qn.T @ G0n @ Qn)
        Nns = [_symmetrized(Qn.T @ N @ Qn) for N in Nns]
    size = G0n.shape[0]
    dim = len(Nns)
    s = cp.Variable()
    expr = cp.Constant(G0n)
    if dim:
        t = cp.Variable(dim)
        expr = expr + sum(t[k] * cp.Constant(Nns[k]) for k in range(dim))
    else:
        t = None
    constraints = [expr - s * np.eye(size) >> 0]
    if dim:
        constraints.append(cp.norm_inf(t) <= _PARAM_BOUND)
    problem = cp.Problem(cp.Maximize(s), constraints)
    try:
        _quiet_solve(problem, cp)
    except cp.error.SolverError:
        return None
    if problem.status not in ("optimal", "optimal_inaccurate") or s.value is None:
        return None
    tvec = (np.zeros(0) if t is None
            else np.atleast_1d(np.asarray(t.value, dtype=float)))
    return float(s.value), tvec


def _try_face(G0, Ns, kappas):
    """Impose G*kappa = 0 on the slice; returns the reduced slice or None."""
    n = len(G0)
    rows, rhs = [], []
    for kappa in kappas:
        for r in range(n):
            rows.append([sum(N[r][c] * kappa[c] for c in range(n)) for N in Ns])
            rhs.append(-sum(G0[r][c] * kappa[c] for c in range(n)))
    sol = solve_affine(rows, rhs)
    if sol is None:
        return None
    t0, dirs = sol
    G0p = _add_scaled(G0, Ns, t0)
    Nsp = []
    for u in dirs:
        Nsp.append(_add_scaled([[Fraction(0)] * n for _ in range(n)], Ns, u))
    return G0p, Nsp


def _numeric_rref(rows, tol=1e-6):
    """Row echelon form of a float matrix; canonicalizes a subspace so that
    a rational span yields rational entries whatever basis came in.  Rows
    are normalized to unit max so the pivot tolerance is scale free."""
    A = np.array(rows, dtype=float)
    A = A / np.maximum(np.abs(A).max(axis=1, keepdims=True), 1e-300)
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        k = r + int(np.argmax(np.abs(A[r:, c])))
        if abs(A[k, c]) < tol:
            continue
        A[[r, k]] = A[[k, r]]
        A[r] = A[r] / A[r, c]
        for i in range(m):
            if i != r and A[i, c] != 0:
                A[i] = A[i] - A[i, c] * A[r]
        r += 1
    out = A[:r]
    out = out / np.maximum(np.abs(out).max(axis=1, keepdims=True), 1e-300)
    return [out[i] for i in range(r)]


def _kernel_candidates(G_np, Q_np):
    """Near-null directions of the reduced matrix, lifted to full space and
    canonicalized; eigh returns an arbitrary rotation of a degenerate
    eigenspace, so individual eigenvectors would not rationalize."""
    reduced = G_np if Q_np is None else _symmetrized(Q_np.T @ G_np @ Q_np)
    w, V = np.linalg.eigh(reduced)
    scale = max(1.0, float(np.abs(w).max()) if len(w) else 1.0)
    vecs = []
    for k in range(len(w)):
        if w[k] < _KERNEL_BAND * scale:
            v = V[:, k]
            vecs.append(v if Q_np is None else Q_np @ v)
    if not vecs:
        return []
    return _numeric_rref(vecs)


def _rational_closure(vecs):
    """Smallest rational subspace containing the numeric span of the kernel
    rows.  Componentwise rounding fails when the span is rational only as a
    whole, with irrational individual vectors; lattice reduction still finds
    the integer relations orthogonal to the span, and the nullspace of those
    relations is the rational closure."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    n = len(vecs[0])
    scale = 10 ** 7
    rows = []
    for j in range(n):
        row = [0] * n
        row[j] = 1
        row.extend(int(round(scale * float(v[j]))) for v in vecs)
        rows.append(row)
    reduced = DomainMatrix.from_list(rows, ZZ).lll().to_list()
    relations = []
    for row in reduced:
        u = [int(x) for x in row[:n]]
        big = max(abs(c) for c in u)
        # relations of a genuine algebraic kernel are small integers; large
        # ones are convergent junk from the rounding noise
        if big == 0 or big > 1000:
            continue
        if max(abs(sum(c * float(v[j]) for j, c in enumerate(u)))
               for v in vecs) > 1e-5:
            continue
        relations.append([Fraction(c) for c in u])
    if not relations:
        return []
    closure = nullspace(relations)
    if len(closure) >= n or len(closure) < len(vecs):
        return []
    out = []
    for vec in closure:
        kappa = _integerize(vec)
        if kappa is not None:
            out.append(kappa)
    return out


def _min_norm_point(G0n, Nns, Qn, delta):
    """Least-norm parameters keeping the compressed matrix almost psd; a
    well scaled point on the optimal face gives clean kernel vectors."""
    import cvxpy as cp

    if Qn is not None:
        G0n = _symmetrized(Qn.T @ G0n @ Qn)
        Nns = [_symmetrized(Qn.T @ N @ Qn) for N in Nns]
    size = G0n.shape[0]
    dim = len(Nns)
    if dim == 0:
        return None
    t = cp.Variable(dim)
    expr = cp.Constant(G0n) + sum(t[k] * cp.Constant(Nns[k])
                                  for k in range(dim))
    constraints = [expr >> -delta * np.eye(size),
                   cp.norm_inf(t) <= _PARAM_BOUND]
    problem = cp.Problem(cp.Minimize(cp.sum_squares(t)), constraints)
    try:
        _quiet_solve(problem, cp)
    except cp.error.SolverError:
        return None
    if problem.status not in ("optimal", "optimal_inaccurate") or t.value is None:
        return None
    return np.atleast_1d(np.asarray(t.value, dtype=float))


def _round_ladder(G0, Ns, tvec, prob):
    """Round the slice parameters at increasing denominators and keep the
    first matrix that passes the exact semidefiniteness check."""
    for den in _ROUND_DENOMINATORS:
        tr = [Fraction(float(x)).limit_denominator(den) for x in tvec]
        G = _add_scaled(G0, Ns, tr)
        ldl = sym_ldl(G)
        if ldl.psd:
            return GramSolution(PSDRationalMatrix(G, ldl), prob.basis,
                                prob.target.variables)
    return None


def _complement(kernel_rows, n):
    """Orthonormal numeric basis of the space cut out by the kernel rows."""
    K = np.array([[float(x) for x in row] for row in kernel_rows], dtype=float)
    _, svals, vt = np.linalg.svd(K)
    cutoff = 1e-10 * max(1.0, svals[0] if len(svals) else 1.0)
    rank = int(np.sum(svals > cutoff))
    return vt[rank:].T


def _exact_solution(G0, prob):
    ldl = sym_ldl(G0)
    if ldl.psd:
        return GramSolution(PSDRationalMatrix(G0, ldl), prob.basis,
                            prob.target.variables)
    return None


_KAPPA_LIMIT = 10 ** 6
_WORK_BUDGET = 40


class _Budget:
    """Caps numeric solves and exact face constructions per gram problem so
    hopeless boundary instances fail fast instead of backtracking forever."""

    def __init__(self, units=_WORK_BUDGET):
        self.units = units

    def spend(self, k=1):
        self.units -= k
        return self.units >= 0


def _descend(prob, G0, Ns, kernel_rows, t_star, band, depth, budget):
    """Facial reduction by rationalized kernel guesses, backtracking over
    extraction points and rationalization denominators; None when every
    branch dead-ends."""
    if depth < 0 or not budget.spend():
        return None
    Qn = _complement(kernel_rows, len(G0)) if kernel_rows else None
    G0n = _np_matrix(G0)
    Nns = [_np_matrix(N) for N in Ns]
    t_mn = _min_norm_point(G0n, Nns, Qn, band)
    if t_mn is not None:
        sol = _round_ladder(G0, Ns, t_mn, prob)
        if sol is not None:
            return sol
    # the least-norm point conditions well but may drop extra rank; the
    # max-margin point has the true face kernel but may be badly scaled
    sources = [tv for tv in (t_mn, t_star) if tv is not None]
    tried = []
    for source in sources:
        G_star = G0n.copy()
        for t, N in zip(source, Nns):
            G_star = G_star + float(t) * N
        vecs = _kernel_candidates(G_star, Qn)
        if not vecs:
            continue
        candidate_sets = []
        for den in _KERNEL_DENOMINATORS:
            kappas = []
            for v in vecs:
                kappa = _integerize(rationalize_vector(v, den))
                if kappa is None or kappa in kernel_rows or kappa in kappas:
                    continue
                if max(abs(c) for c in kappa) > _KAPPA_LIMIT:
                    continue
                kappas.append(kappa)
            if kappas:
                candidate_sets.append(kappas)
        closure = [kappa for kappa in _rational_closure(vecs)
                   if kappa not in kernel_rows
                   and max(abs(c) for c in kappa) <= _KAPPA_LIMIT]
        if len(closure) >= len(vecs):
            candidate_sets.append(closure)
        for kappas in candidate_sets:
            if set(kappas) in tried:
                continue
            tried.append(set(kappas))
            if not budget.spend():
                return None
            face = _try_face(G0, Ns, kappas)
            if face is None:
                continue
            G0f, Nsf = face
            krows = kernel_rows + kappas
            if not Nsf:
                sol = _exact_solution(G0f, prob)
                if sol is not None:
                    return sol
                continue
            Qf = _complement(krows, len(G0f))
            if Qf.shape[1] == 0:
                sol = _exact_solution(G0f, prob)
                if sol is not None:
                    return sol
                continue
            if not budget.spend():
                return None
            res = _solve_max_lambda(_np_matrix(G0f),
                                    [_np_matrix(N) for N in Nsf], Qf)
            if res is None:
                continue
            sf, tf = res
            if sf < -band:
                continue
            sol = _round_ladder(G0f, Nsf, tf, prob)
            if sol is not None:
                return sol
            sol = _descend(prob, G0f, Nsf, krows, tf, band, depth - 1,
                           budget)
            if sol is not None:
                return sol
    return None


def gram_solve(prob, tolerance=1e-9):
    """GramSolution, Infeasible with an exact separating functional, or
    Indeterminate; never a verdict on numeric evidence alone."""
    if not prob.basis:
        raise SOSError("empty Gram basis")
    n = len(prob.basis)
    pairs, products, mons, matrix, rhs, target_nf = _assemble(prob)
    sol = solve_affine(matrix, rhs)
    if sol is None:
        wit = _inconsistency_witness(matrix, rhs, mons, products, pairs)
        if wit is not None:
            return wit
        return Indeterminate("inconsistent constraints but no certified functional")
    particular, dirs = sol
    G0 = _matrix_from_pairs(particular, pairs, n)
    if not dirs:
        out = _exact_solution(G0, prob)
        if out is not None:
            return out
        return _dual_attempt(prob, pairs, products, mons, target_nf, tolerance)
    Ns = [_matrix_from_pairs(u, pairs, n) for u in dirs]
    band = _boundary_band(tolerance)
    res = _solve_max_lambda(_np_matrix(G0), [_np_matrix(N) for N in Ns], None)
    if res is None:
        return _dual_attempt(prob, pairs, products, mons, target_nf, tolerance)
    s_star, t_star = res
    if s_star < -band:
        return _dual_attempt(prob, pairs, products, mons, target_nf, tolerance)
    out = _round_ladder(G0, Ns, t_star, prob)
    if out is not None:
        return out
    out = _descend(prob, G0, Ns, [], t_star, band, n, _Budget())
    if out is not None:
        return out
    return Indeterminate("boundary solution did not rationalize")


def _inconsistency_witness(matrix, rhs, mons, products, pairs):
    """Left-nullspace functional proving the constraints inconsistent."""
    transposed = [[matrix[r][c] for r in range(len(matrix))]
                  for c in range(len(matrix[0]))] if matrix and matrix[0] else []
    if not transposed:
        left = [[Fraction(1) if i == r else Fraction(0) for i in range(len(matrix))]
                for r in range(len(matrix))]
    else:
        left = nullspace(transposed)
    for u in left:
        value = sum(a * b for a, b in zip(u, rhs))
        if value != 0:
            if value > 0:
                u = [-x for x in u]
                value = -value
            functional = {m: x for m, x in zip(mons, u) if x != 0}
            return Infeasible(functional, value,
                              "coefficients of the target lie outside the "
                              "span of basis products")
    return None


def _dual_attempt(prob, pairs, products, mons, target_nf, tolerance):
    """Numeric separating functional, verified exactly before reporting."""
    import cvxpy as cp

    n = len(prob.basis)
    index = {m: r for r, m in enumerate(mons)}
    markers = [np.zeros((n, n)) for _ in mons]
    rational_markers = [[[Fraction(0)] * n for _ in range(n)] for _ in mons]
    for (i, j), terms in zip(pairs, products):
        for mon, c in terms.items():
            r = index[mon]
            markers[r][i][j] += float(c)
            rational_markers[r][i][j] += c
            if i != j:
                markers[r][j][i] += float(c)
                rational_markers[r][j][i] += c
    tvec = [target_nf.terms.get(m, Fraction(0)) for m in mons]
    tnp = np.array([float(x) for x in tvec])

    y = cp.Variable(len(mons))
    s = cp.Variable()
    M = sum(y[r] * markers[r] for r in range(len(mons)))
    constraints = [M - s * np.eye(n) >> 0, tnp @ y <= -s, cp.norm_inf(y) <= 1]
    problem = cp.Problem(cp.Maximize(s), constraints)
    try:
        _quiet_solve(problem, cp)
    except cp.error.SolverError:
        return Indeterminate("dual solver failed")
    band = _boundary_band(tolerance)
    if problem.status not in ("optimal", "optimal_inaccurate") \
            or s.value is None or float(s.value) <= band:
        return Indeterminate("no separating functional within tolerance")
    y_star = np.asarray(y.value, dtype=float)
    for den in _ROUND_DENOMINATORS:
        yr = rationalize_vector(y_star, den)
        value = sum(a * b for a, b in zip(yr, tvec))
        if value >= 0:
            continue
        M_exact = [[Fraction(0)] * n for _ in range(n)]
        for r, coeff in enumerate(yr):
            if coeff == 0:
                continue
            rm = rational_markers[r]
            for i in range(n):
                for j in range(n):
                    if rm[i][j]:
                        M_exact[i][j] += coeff * rm[i][j]
        if sym_ldl(M_exact).psd:
            functional = {m: c for m, c in zip(mons, yr) if c != 0}
            return Infeasible(functional, value, "separating functional")
    return Indeterminate("separating functional did not survive rounding")


def check_infeasibility_witness(prob, witness):
    """Exact re-check of a separating functional against its problem."""
    pairs, products, mons, _, _, target_nf = _assemble(prob)
    n = len(prob.basis)
    y = witness.functional
    M = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), terms in zip(pairs, products):
        entry = sum(c * y.get(mon, Fraction(0)) for mon, c in terms.items())
        M[i][j] = entry
        M[j][i] = entry
    value = sum(c * y.get(mon, Fraction(0))
                for mon, c in target_nf.terms.items())
    return sym_ldl(M).psd and value < 0 and value == witness.value


# -- squares from an exact factorization ------------------------------------

def extract_squares(matrix, basis, variables):
    """Polynomials q_i with sum q_i^2 = basis^T * matrix * basis, exactly."""
    ldl = matrix.ldl if matrix.ldl is not None else sym_ldl(matrix.entries)
    if not ldl.psd:
        raise NotPSD("matrix is not positive semidefinite")
    perm, lower, diag = ldl.perm, ldl.lower, ldl.diag
    squares = []
    for k, d in enumerate(diag):
        if d == 0:
            continue
        if d < 0:
            raise NotPSD("negative pivot in factorization")
        row = RealPolynomial.zero(variables)
        for i in range(k, len(perm)):
            c = lower[i][k]
            if c:
                row = row + RealPolynomial.monomial(variables, basis[perm[i]], c)
        for f in rational_square_parts(d):
            squares.append(row * f)
    return tuple(squares)


def certificate_residual(cert):
    """multiplier^m * target - sum of squares - cofactor*ideal, exactly."""
    if cert.kind == "fraction":
        total = None
        for q in cert.squares:
            sq = q * q
            total = sq if total is None else total + sq
        if total is None:
            return cert.target
        return cert.target - total
    lhs = cert.target
    if cert.multiplier is not None and cert.multiplier_exponent:
        lhs = lhs * cert.multiplier ** cert.multiplier_exponent
    total = RealPolynomial.zero(lhs.variables)
    for q in cert.squares:
        total = total + q * q
    if cert.ideal_cofactor is not None and cert.ideal is not None:
        total = total + cert.ideal_cofactor * cert.ideal
    return lhs - total


def _assert_zero_residual(cert):
    if not certificate_residual(cert).is_zero():
        raise SOSError("internal error: certificate residual is nonzero")
    return cert


# -- univariate fast path ---------------------------------------------------

def univariate_sos(p, tolerance=1e-9):
    """Certificate for a one-variable psd polynomial, NotPSD with a
    rational witness point otherwise."""
    if len(p.variables) != 1:
        raise SOSError("univariate certification needs one variable")
    if p.is_zero():
        return SOSCertificate(target=p, squares=())
    if not is_psd(p):
        w = find_negative_point(p)
        raise NotPSD("polynomial is negative on the line",
                     point=(w,), value=p.eval([w]))
    lc, sq_part, rest = even_odd_split(p)
    squares = []
    if rest.degree() == 0:
        for f in rational_square_parts(lc):
            squares.append(sq_part * f)
    else:
        res = gram_solve(GramProblem(rest, newton_basis(rest)), tolerance)
        if not isinstance(res, GramSolution):
            raise SOSError("strictly positive factor resisted certification")
        for f in rational_square_parts(lc):
            for q in res.squares():
                squares.append(sq_part * q * f)
    return _assert_zero_residual(
        SOSCertificate(target=p, squares=tuple(squares)))


# -- multiplier search ------------------------------------------------------

def norm_polynomial(variables=("x", "y")):
    """x^2 + y^2 over the given two-variable ring."""
    if len(variables) != 2:
        raise SOSError("norm multiplier needs a two-variable ring")
    x = RealPolynomial.variable(variables, variables[0])
    y = RealPolynomial.variable(variables, variables[1])
    return x * x + y * y


def multiplier_search(p, w=None, m_max=6, tolerance=1e-9):
    """Smallest m <= m_max with w^m * p a certified sum of squares."""
    if w is None:
        w = norm_polynomial(p.variables)
    if w.is_zero():
        raise SOSError("zero multiplier")
    if p.is_zero():
        return SOSCertificate(target=p, squares=(), multiplier=w)
    trail = []
    note = ""
    for m in range(m_max + 1):
        target = p * w ** m
        res = gram_solve(GramProblem(target, newton_basis(target)), tolerance)
        if isinstance(res, GramSolution):
            cert = SOSCertificate(target=p, squares=res.squares(),
                                  multiplier=w, multiplier_exponent=m)
            return _assert_zero_residual(cert)
        if isinstance(res, Indeterminate):
            trail.append((m, f"indeterminate: {res.note}"))
            note = "some multiplier levels were indeterminate"
        else:
            trail.append((m, "infeasible"))
    return Exhausted(m_max, tuple(trail), note)


# -- homogenization ---------------------------------------------------------

def homogenize(p, new_var):
    if new_var in p.variables:
        raise SOSError(f"variable {new_var} already present")
    variables = p.variables + (new_var,)
    if p.is_zero():
        return RealPolynomial.zero(variables)
    d = p.degree()
    terms = {mon + (d - sum(mon),): c for mon, c in p.terms.items()}
    return RealPolynomial(variables, terms)


def dehomogenize(p, var):
    idx = p.variables.index(var)
    variables = p.variables[:idx] + p.variables[idx + 1:]
    out = {}
    for mon, c in p.terms.items():
        key = mon[:idx] + mon[idx + 1:]
        out[key] = out.get(key, Fraction(0)) + c
    out = {m: c for m, c in out.items() if c != 0}
    return RealPolynomial(variables, out)


# -- dividing a common square factor out of a certificate -------------------

def divide_out_squares(cert, p, u, v):
    """Certificate for target/p^2 obtained by dividing every square by p.

    u and v are rational points with p(u) < 0 < p(v); they witness that p
    changes sign, which is what justifies expecting p to divide each
    square."""
    if cert.ideal is not None:
        raise SOSError("certificates with an ideal part cannot be divided")
    pu = p.eval([Fraction(c) for c in u])
    pv = p.eval([Fraction(c) for c in v])
    if not (pu < 0 < pv):
        raise BadWitness(f"need p(u) < 0 < p(v), got {pu} and {pv}")
    new_squares = []
    for q in cert.squares:
        quo = q.exact_quotient(p)
        if quo is None:
            raise NotDivisible(f"{p} does not divide the square {q}")
        new_squares.append(quo)
    new_target = cert.target.exact_quotient(p * p)
    if new_target is None:
        raise NotDivisible(f"{p}^2 does not divide the target")
    cert2 = SOSCertificate(target=new_target, squares=tuple(new_squares),
                           multiplier=cert.multiplier,
                           multiplier_exponent=cert.multiplier_exponent)
    return _assert_zero_residual(cert2)


# -- fractions over x^2 + y^2 -----------------------------------------------

def plane_witness_points(radius=8):
    """Nonzero integer points, ring by ring, axis points first."""
    for r in range(1, radius + 1):
        first = [(r, 0), (-r, 0), (0, r), (0, -r)]
        for pt in first:
            yield pt
        rest = []
        for a in range(-r, r + 1):
            for b in range(-r, r + 1):
                if max(abs(a), abs(b)) == r and (a, b) not in first:
                    rest.append((a, b))
        for pt in sorted(rest):
            yield pt


def fraction_sos(elem, m_max=6, tolerance=1e-9):
    """Certificate, NotPSDWitness, or Exhausted for numerator/(x^2+y^2)^k."""
    basis = single_norm_basis()
    if elem.basis != basis:
        raise SOSError("fraction certification expects the x^2+y^2 basis")
    numerator = elem.numerator
    k = elem.exponents[0]
    for pt in plane_witness_points():
        if numerator.eval([Fraction(pt[0]), Fraction(pt[1])]) < 0:
            return NotPSDWitness(pt, elem.eval([Fraction(pt[0]), Fraction(pt[1])]))
    w = basis.entries[0].n
    res = multiplier_search(numerator, w, m_max=m_max, tolerance=tolerance)
    if isinstance(res, Exhausted):
        return res
    m = res.multiplier_exponent
    x = RealPolynomial.variable(basis.variables, "x")
    y = RealPolynomial.variable(basis.variables, "y")
    squares = []
    if (m + k) % 2 == 0:
        e = (m + k) // 2
        for q in res.squares:
            squares.append(FractionElement(basis, q, (e,)))
    else:
        e = (m + k + 1) // 2
        for q in res.squares:
            squares.append(FractionElement(basis, x * q, (e,)))
            squares.append(FractionElement(basis, y * q, (e,)))
    cert = SOSCertificate(target=elem, squares=tuple(squares), multiplier=w,
                          multiplier_exponent=m, kind="fraction")
    return _assert_zero_residual(cert)


# -- the cylinder -----------------------------------------------------------

def _circle_points():
    points = [(Fraction(1), Fraction(0)), (Fraction(-1), Fraction(0)),
              (Fraction(0), Fraction(1)), (Fraction(0), Fraction(-1))]
    for a, b, c in ((3, 4, 5), (5, 12, 13), (8, 15, 17)):
        for p, q in ((a, b), (b, a)):
            for sp in (1, -1):
                for sq in (1, -1):
                    points.append((Fraction(sp * p, c), Fraction(sq * q, c)))
    return points


_CIRCLE = _circle_points()
_CYL_Z = [Fraction(z) for z in (0, 1, -1, 2, -2, 3, -3)]


def cylinder_witness_points():
    for cx, cy in _CIRCLE:
        for z in _CYL_Z:
            yield (cx, cy, z)


def cylinder_sos(p, degree_cap=None, tolerance=1e-9):
    """Certificate p = sum q_i^2 + c*(1-x^2-y^2), NotPSDWitness from an
    exact point on the cylinder, or Exhausted at the degree cap."""
    variables = p.variables
    if variables not in (("x", "y"), ("x", "y", "z")):
        raise SOSError("cylinder targets live in the x, y(, z) ring")
    if len(variables) == 2:
        witnesses = ((cx, cy) for cx, cy in _CIRCLE)
    else:
        witnesses = cylinder_witness_points()
    for pt in witnesses:
        value = p.eval(list(pt))
        if value < 0:
            return NotPSDWitness(tuple(pt), value)
    ideal = circle_ideal(variables)
    pn = cylinder_normal(p)
    if degree_cap is None:
        degree_cap = max(p.degree(), 0) + 4
    if pn.is_zero():
        cof = p.exact_quotient(ideal)
        cert = SOSCertificate(target=p, squares=(), ideal=ideal,
                              ideal_cofactor=cof, kind="cylinder")
        return _assert_zero_residual(cert)
    t_low = max(0, (pn.degree() + 1) // 2)
    trail = []
    note = ""
    for t in range(t_low, degree_cap // 2 + 1):
        basis = _cylinder_basis(variables, t)
        res = gram_solve(GramProblem(pn, basis, ideal), tolerance)
        if isinstance(res, GramSolution):
            squares = res.squares()
            total = RealPolynomial.zero(variables)
            for q in squares:
                total = total + q * q
            cof = (p - total).exact_quotient(ideal)
            if cof is None:
                raise SOSError("internal error: cofactor division failed")
            cert = SOSCertificate(target=p, squares=squares, ideal=ideal,
                                  ideal_cofactor=cof, kind="cylinder")
            return _assert_zero_residual(cert)
        if isinstance(res, Indeterminate):
            trail.append((t, f"indeterminate: {res.note}"))
            note = "some levels were indeterminate"
        else:
            trail.append((t, "infeasible at this degree"))
    return Exhausted(degree_cap, tuple(trail), note)


def _cylinder_basis(variables, t):
    iy = variables.index("y")
    nv = len(variables)
    out = []
    for mon in itertools.product(*[range(t + 1)] * nv):
        if sum(mon) <= t and mon[iy] <= 1:
            out.append(mon)
    return tuple(sorted(out, key=grlex_key))

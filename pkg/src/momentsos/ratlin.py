"""Exact linear algebra over Q and Q(i).

Matrices are plain lists of lists of Fractions (or GaussianRationals for the
hermitean routines).  Everything here is dense and exact; problem sizes in
this package stay small (tens of rows), so clarity wins over asymptotics.

The PSD checks return factorizations with explicit refutation witnesses: if
the matrix is not positive semidefinite, a vector v with v^T M v < 0 (or
v* M v < 0 in the hermitean case) is produced, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polycore import GR_ONE, GR_ZERO, GaussianRational


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def mat_copy(m):
    return [list(map(_frac, row)) for row in m]


def identity(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def mat_vec(m, v):
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m]


def vec_dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def rref(matrix):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    rows = mat_copy(matrix)
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix):
    return len(rref(matrix)[1])


def nullspace(matrix):
    """Basis of the right nullspace.  Free variables are set to 1 one at a
    time, in ascending column order, so the basis is deterministic."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve_affine(matrix, rhs):
    """Solve matrix*x = rhs over Q.

    Returns (particular, nullspace_basis), or None when inconsistent.  The
    particular solution sets all free variables to zero.
    """
    if not matrix:
        return ([], [])
    ncols = len(matrix[0])
    aug = [list(map(_frac, row)) + [_frac(b)] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    for row in rows:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    particular = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        particular[pc] = rows[r][ncols]
    return particular, nullspace(matrix)


@dataclass
class LDLResult:
    """Pivoted factorization M = P^T L D L^T P of a symmetric matrix.

    ``psd`` is True when every pivot is nonnegative; then ``perm``, ``lower``
    and ``diag`` reconstruct M exactly.  When False, ``witness`` is a vector
    with witness^T M witness = ``witness_value`` < 0.
    """

    psd: bool
    perm: list
    lower: list
    diag: list
    witness: list = None
    witness_value: Fraction = None


def _ldl_core(matrix, conj, zero, one, is_neg, to_value):
    """Shared pivoted LDL for symmetric (conj = identity) and hermitean
    (conj = conjugation) matrices.  Pivoting: largest remaining diagonal,
    ties broken by smallest index, which is deterministic and keeps pivots
    positive as long as possible."""
    n = len(matrix)
    s = [list(row) for row in matrix]
    order = []          # pivot index chosen at each step (original indices)
    remaining = list(range(n))
    lower = {}          # (i, k) -> multiplier, original index pairs
    diag = []

    def schur_witness(u_map):
        # u_map: original index -> coefficient, supported on `remaining`.
        # Solve (L^*) v = [0 over pivots; u] by back substitution; then
        # v^* M v equals u^* S u for the current Schur complement S.
        v = dict(u_map)
        for k in reversed(range(len(order))):
            p = order[k]
            acc = zero
            for i, coeff in list(v.items()):
                if i != p and (i, p) in lower:
                    acc = acc - conj(lower[(i, p)]) * coeff
            v[p] = acc
        out = [zero] * n
        for i, coeff in v.items():
            out[i] = coeff
        return out

    while remaining:
        best = None
        for i in remaining:
            val = to_value(s[i][i])
            if best is None or val > best[1]:
                best = (i, val)
        p, dval = best
        if is_neg(s[p][p]):
            w = schur_witness({p: one})
            return LDLResult(False, None, None, None, w, s[p][p])
        if dval == 0:
            # the largest remaining diagonal is 0; psd needs every remaining
            # diagonal 0 and then every remaining off-diagonal 0
            for i in remaining:
                if is_neg(s[i][i]):
                    w = schur_witness({i: one})
                    return LDLResult(False, None, None, None, w, s[i][i])
            bad = None
            for ii, i in enumerate(remaining):
                for j in remaining[ii + 1:]:
                    if s[i][j] != zero:
                        bad = (i, j)
                        break
                if bad:
                    break
            if bad is None:
                diag.extend(zero for _ in remaining)
                order.extend(remaining)
                remaining = []
                break
            i, j = bad
            w = schur_witness({i: one, j: -conj(s[i][j])})
            # value = 2 Re(conj(u_i) s_ij u_j) = -2 |s_ij|^2
            val = -(s[i][j] * conj(s[i][j])) * 2
            return LDLResult(False, None, None, None, w, val)
        order.append(p)
        remaining.remove(p)
        d = s[p][p]
        diag.append(d)
        for i in remaining:
            lower[(i, p)] = s[i][p] / d
        for i in remaining:
            for j in remaining:
                s[i][j] = s[i][j] - lower[(i, p)] * conj(lower[(j, p)]) * d
    # assemble unit lower triangular factor in pivot order
    k = len(order)
    lmat = [[zero] * k for _ in range(k)]
    for a in range(k):
        lmat[a][a] = one
        for b in range(a):
            lmat[a][b] = lower.get((order[a], order[b]), zero)
    return LDLResult(True, order, lmat, diag)


def _same(x):
    return x


def sym_ldl(matrix):
    """Pivoted LDL of a symmetric rational matrix with a PSD verdict."""
    m = mat_copy(matrix)
    for i in range(len(m)):
        for j in range(len(m)):
            if m[i][j] != m[j][i]:
                raise ValueError("matrix is not symmetric")
    return _ldl_core(m, _same, Fraction(0), Fraction(1), lambda x: x < 0, lambda x: x)


def herm_ldl(matrix):
    """Pivoted LDL* of a hermitean Gaussian-rational matrix.

    Diagonal pivots of a hermitean matrix are real; the PSD verdict and the
    refutation witness (complex vector v with v* M v < 0) are exact.
    """
    n = len(matrix)
    m = [[x if isinstance(x, GaussianRational) else GaussianRational(x)
          for x in row] for row in matrix]
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i].conj():
                raise ValueError("matrix is not hermitean")
        if m[i][i].im != 0:
            raise ValueError("matrix is not hermitean")
    res = _ldl_core(
        m,
        lambda c: c.conj(),
        GR_ZERO,
        GR_ONE,
        lambda c: c.re < 0,
        lambda c: c.re,
    )
    if res.psd:
        res.diag = [d.re if isinstance(d, GaussianRational) else d for d in res.diag]
    else:
        wv = res.witness_value
        res.witness_value = wv.re if isinstance(wv, GaussianRational) else wv
    return res


def psd_check(matrix):
    """(True, LDLResult) for PSD symmetric rational matrices, else
    (False, LDLResult-with-witness)."""
    res = sym_ldl(matrix)
    return res.psd, res


def reconstruct_from_ldl(res, n):
    """Rebuild the matrix from a successful sym_ldl run (for tests)."""
    if not res.psd:
        raise ValueError("no factorization on refuted matrices")
    k = len(res.perm)
    out = [[Fraction(0)] * n for _ in range(n)]
    for a in range(k):
        for b in range(k):
            acc = Fraction(0)
            for t in range(min(a, b) + 1):
                acc += res.lower[a][t] * res.lower[b][t] * res.diag[t]
            out[res.perm[a]][res.perm[b]] = acc
    return out


def hull_contains(points, target):
    """Exact membership of ``target`` in conv(points), any dimension.

    Phase-1 simplex with Bland's rule over Fractions: feasibility of
    sum lam_i p_i = target, sum lam_i = 1, lam >= 0.
    """
    pts = [list(map(Fraction, p)) for p in points]
    tgt = list(map(Fraction, target))
    if not pts:
        return False
    dim = len(tgt)
    rows = []
    rhs = []
    for c in range(dim):
        rows.append([p[c] for p in pts])
        rhs.append(tgt[c])
    rows.append([Fraction(1)] * len(pts))
    rhs.append(Fraction(1))
    # flip rows to make rhs nonnegative
    for r in range(len(rows)):
        if rhs[r] < 0:
            rows[r] = [-x for x in rows[r]]
            rhs[r] = -rhs[r]
    nvar = len(pts)
    nrow = len(rows)
    # tableau with artificial variables; minimize their sum
    tab = [rows[r] + [Fraction(1) if c == r else Fraction(0) for c in range(nrow)] + [rhs[r]]
           for r in range(nrow)]
    basis = [nvar + r for r in range(nrow)]
    cost = [Fraction(0)] * nvar + [Fraction(1)] * nrow + [Fraction(0)]
    for r in range(nrow):
        for c in range(nvar + nrow + 1):
            cost[c] -= tab[r][c]
    while True:
        enter = None
        for c in range(nvar + nrow):
            if cost[c] < 0:
                enter = c
                break
        if enter is None:
            break
        leave = None
        best = None
        for r in range(nrow):
            if tab[r][enter] > 0:
                ratio = tab[r][-1] / tab[r][enter]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best = ratio
                    leave = r
        if leave is None:
            return False  # unbounded phase-1 cannot happen; defensive
        pv = tab[leave][enter]
        tab[leave] = [x / pv for x in tab[leave]]
        for r in range(nrow):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [a - f * b for a, b in zip(tab[r], tab[leave])]
        f = cost[enter]
        if f != 0:
            cost = [a - f * b for a, b in zip(cost, tab[leave] + [])]
        basis[leave] = enter
    return -cost[-1] == 0


def rationalize_vector(vec, max_den):
    """Componentwise nearest fractions with bounded denominator."""
    return [Fraction(float(x)).limit_denominator(max_den) for x in vec]

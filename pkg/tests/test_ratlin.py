import random
from fractions import Fraction

from momentsos.polycore import GaussianRational
from momentsos.ratlin import (
    herm_ldl,
    hull_contains,
    identity,
    mat_vec,
    nullspace,
    psd_check,
    rank,
    rationalize_vector,
    reconstruct_from_ldl,
    rref,
    solve_affine,
    sym_ldl,
    vec_dot,
)


def rand_matrix(rng, m, n, bound=5):
    return [[Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
             for _ in range(n)] for _ in range(m)]


def test_rref_pivot_columns_are_unit():
    rng = random.Random(2)
    for _ in range(20):
        A = rand_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        rows, pivots = rref(A)
        for r, c in enumerate(pivots):
            assert rows[r][c] == 1
            assert all(rows[i][c] == 0 for i in range(len(rows)) if i != r)


def test_rank_plus_nullity():
    rng = random.Random(4)
    for _ in range(20):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = rand_matrix(rng, m, n)
        assert rank(A) + len(nullspace(A)) == n


def test_nullspace_vectors_are_killed():
    rng = random.Random(6)
    for _ in range(20):
        A = rand_matrix(rng, 3, 5)
        for v in nullspace(A):
            assert all(x == 0 for x in mat_vec(A, v))


def test_solve_affine_consistent_and_not():
    rng = random.Random(8)
    for _ in range(20):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        A = rand_matrix(rng, m, n)
        x0 = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        rhs = mat_vec(A, x0)
        sol = solve_affine(A, rhs)
        assert sol is not None
        t0, dirs = sol
        assert mat_vec(A, t0) == rhs
        for d in dirs:
            assert all(x == 0 for x in mat_vec(A, d))
        assert len(dirs) == n - rank(A)
    # x = 0 and x = 1 cannot both hold
    assert solve_affine([[Fraction(1)], [Fraction(1)]],
                        [Fraction(0), Fraction(1)]) is None


def test_sym_ldl_reconstructs_psd_input():
    rng = random.Random(10)
    for _ in range(15):
        n = rng.randint(1, 5)
        B = rand_matrix(rng, n, n)
        M = [[sum(B[k][i] * B[k][j] for k in range(n)) for j in range(n)]
             for i in range(n)]
        res = sym_ldl(M)
        assert res.psd
        assert reconstruct_from_ldl(res, n) == M
        assert psd_check(M)


def test_sym_ldl_witness_is_exact():
    rng = random.Random(12)
    hits = 0
    for _ in range(30):
        n = rng.randint(2, 5)
        M = rand_matrix(rng, n, n)
        M = [[M[i][j] + M[j][i] for j in range(n)] for i in range(n)]
        res = sym_ldl(M)
        if res.psd:
            continue
        hits += 1
        w = res.witness
        val = vec_dot(w, mat_vec(M, w))
        assert val == res.witness_value
        assert val < 0
    assert hits >= 10


def test_sym_ldl_zero_pivot_before_negative():
    """A leading zero pivot must not mask a negative one further down."""
    M = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(-1)]]
    res = sym_ldl(M)
    assert not res.psd
    assert vec_dot(res.witness, mat_vec(M, res.witness)) == res.witness_value < 0
    assert sym_ldl([[Fraction(0)]]).psd


def test_herm_ldl_on_random_gram_matrices():
    rng = random.Random(14)
    for _ in range(15):
        n = rng.randint(1, 4)
        B = [[GaussianRational(rng.randint(-4, 4), rng.randint(-4, 4))
              for _ in range(n)] for _ in range(n)]
        M = [[sum(B[k][i].conj() * B[k][j] for k in range(n))
              for j in range(n)] for i in range(n)]
        res = herm_ldl(M)
        assert res.psd


def test_herm_ldl_witness():
    i = GaussianRational(0, 1)
    one = GaussianRational(1)
    # [[1, 2i], [-2i, 1]] has eigenvalues -1 and 3
    M = [[one, 2 * i], [-2 * i, one]]
    res = herm_ldl(M)
    assert not res.psd
    w = res.witness
    total = GaussianRational(0)
    for r in range(2):
        for c in range(2):
            total = total + w[r].conj() * M[r][c] * w[c]
    assert total.im == 0
    assert total.re == res.witness_value < 0


def test_hull_contains_square():
    corners = [(Fraction(0), Fraction(0)), (Fraction(2), Fraction(0)),
               (Fraction(0), Fraction(2)), (Fraction(2), Fraction(2))]
    assert hull_contains(corners, (Fraction(1), Fraction(1)))
    assert hull_contains(corners, (Fraction(2), Fraction(1)))
    assert not hull_contains(corners, (Fraction(3), Fraction(1)))
    assert not hull_contains(corners, (Fraction(1), Fraction(-1)))


def test_rationalize_vector_recovers_small_fractions():
    vec = [1 / 3, -2 / 7, 0.25]
    out = rationalize_vector(vec, 64)
    assert out == [Fraction(1, 3), Fraction(-2, 7), Fraction(1, 4)]


def test_identity_shape():
    E = identity(3)
    assert E == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]

import random
from fractions import Fraction

import pytest

from momentsos.polycore import GaussianRational
from momentsos.sos import Exhausted, NotPSDWitness, SOSCertificate
from momentsos.semigroups import (
    InvalidIndex,
    MissingValue,
    NotHermitean,
    SemigroupElement,
    SemigroupError,
    StarSemigroup,
    TruncatedFunctional,
    box_window,
    character_value,
    element_value,
    functional_from_atoms,
    functional_from_element,
    hermitean_image,
    hermitean_image_algebra,
    hermitean_square_certify,
    moment_matrix,
    product_window,
    semigroup_residual,
    to_function_algebra,
    truncated_psd_check,
)

Z2 = StarSemigroup("Z2")
N0Z = StarSemigroup("N0xZ")
NPL = StarSemigroup("Nplus")
ALL = (Z2, N0Z, NPL)


def rand_element(rng, sg, nterms=2):
    keys = box_window(sg, 1)
    elem = SemigroupElement(sg, {})
    for _ in range(nterms):
        key = rng.choice(keys)
        c = GaussianRational(Fraction(rng.randint(-2, 2)),
                            Fraction(rng.randint(-2, 2)))
        elem = elem + SemigroupElement(sg, {key: c})
    return elem


def rand_point(rng, sg):
    if sg.kind == "N0xZ":
        # rational circle point times a nonzero height
        return (Fraction(3, 5), Fraction(4, 5), Fraction(rng.randint(1, 3)))
    while True:
        x, y = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
        if x != 0 or y != 0:
            return (x, y)


def test_validity_rules():
    assert Z2.valid((-5, 7))
    assert N0Z.valid((0, -3)) and not N0Z.valid((-1, 0))
    assert NPL.valid((2, -2)) and not NPL.valid((0, -1))
    with pytest.raises(SemigroupError):
        StarSemigroup("Zx")


def test_star_key_is_an_involution():
    rng = random.Random(81)
    for sg in ALL:
        for key in box_window(sg, 2):
            sk = sg.star_key(key)
            assert sg.valid(sk)
            assert sg.star_key(sk) == key
    assert Z2.star_key((2, -1)) == (-1, 2)
    assert N0Z.star_key((2, -1)) == (2, 1)
    assert NPL.star_key((2, -1)) == (-1, 2)


def test_box_window_sizes():
    assert len(box_window(Z2, 1)) == 9
    assert len(box_window(N0Z, 1)) == 6
    assert box_window(NPL, 1) == ((-1, 1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1))


def test_element_star_and_products():
    rng = random.Random(83)
    for sg in ALL:
        for _ in range(10):
            a = rand_element(rng, sg)
            b = rand_element(rng, sg)
            assert (a * b).star() == b.star() * a.star()
            assert a.star().star() == a
            h = a.star() * a
            assert h.is_hermitean()


def test_invalid_key_rejected():
    with pytest.raises(InvalidIndex):
        SemigroupElement.delta(N0Z, -1, 0)


def test_characters_are_star_homomorphisms():
    rng = random.Random(85)
    for sg in ALL:
        keys = box_window(sg, 2)
        for _ in range(12):
            pt = rand_point(rng, sg)
            s, t = rng.choice(keys), rng.choice(keys)
            st = (s[0] + t[0], s[1] + t[1])
            assert character_value(sg, pt, s) * character_value(sg, pt, t) \
                == character_value(sg, pt, st)
            assert character_value(sg, pt, sg.star_key(s)) \
                == character_value(sg, pt, s).conj()


def test_element_value_matches_image_evaluation():
    """The function-algebra image evaluates to the element's character value."""
    rng = random.Random(87)
    for sg in ALL:
        for _ in range(8):
            a = rand_element(rng, sg)
            img = to_function_algebra(a)
            pt = rand_point(rng, sg)
            v = element_value(a, pt)
            assert img.re.eval(pt) == v.re
            assert img.im.eval(pt) == v.im


def test_images_pinned():
    assert str(to_function_algebra(SemigroupElement.delta(Z2, 1, 1)).re) \
        == "x^2 + y^2"
    img = to_function_algebra(SemigroupElement.delta(Z2, -1, 0))
    assert str(img.re) == "(x) / (x^2 + y^2)"
    assert str(img.im) == "(-y) / (x^2 + y^2)"
    img = to_function_algebra(SemigroupElement.delta(NPL, 1, -1))
    assert str(img.re) == "(x^2 - y^2) / (x^2 + y^2)"
    assert str(img.im) == "(2*x*y) / (x^2 + y^2)"
    img = to_function_algebra(SemigroupElement.delta(N0Z, 2, 1))
    assert str(img.re) == "x*z^2"
    assert str(img.im) == "y*z^2"


def test_hermitean_image_requires_hermitean_input():
    a = SemigroupElement.delta(Z2, 1, 1) + SemigroupElement.delta(Z2, -1, -1)
    assert str(hermitean_image(a)) == "(x^4 + 2*x^2*y^2 + y^4 + 1) / (x^2 + y^2)"
    with pytest.raises(NotHermitean):
        hermitean_image(SemigroupElement.delta(Z2, 1, 0))


def test_image_algebra_descriptions():
    assert hermitean_image_algebra(Z2).kind == "fraction"
    assert hermitean_image_algebra(N0Z).kind == "cylinder"
    assert hermitean_image_algebra(NPL).kind == "subalgebra"
    assert "1/(x^2 + y^2)" in hermitean_image_algebra(Z2).generators


def test_truncated_functional_consistency_checks():
    w = box_window(Z2, 1)
    with pytest.raises(SemigroupError) as e:
        TruncatedFunctional(Z2, w, {(0, 2): GaussianRational(0, 1),
                                    (2, 0): GaussianRational(0, 1)})
    assert "not conjugate" in str(e.value)
    L = TruncatedFunctional(Z2, w, {(0, 2): GaussianRational(0, 1)})
    assert L.value((2, 0)) == GaussianRational(0, -1)
    with pytest.raises(MissingValue):
        L.value((5, 5))
    with pytest.raises(InvalidIndex):
        TruncatedFunctional(N0Z, ((-1, 0),), {})
    with pytest.raises(AttributeError):
        L.values = {}


def test_moment_matrix_is_hermitean():
    rng = random.Random(89)
    for sg in ALL:
        a = rand_element(rng, sg)
        pts = [rand_point(rng, sg) for _ in range(2)]
        L = functional_from_element(a.star() * a, pts, box_window(sg, 1))
        M = moment_matrix(L)
        n = len(M)
        for i in range(n):
            for j in range(n):
                assert M[i][j] == M[j][i].conj()


def test_functionals_of_squares_are_psd_on_every_window():
    rng = random.Random(91)
    for sg in ALL:
        for radius in (1, 2):
            a = rand_element(rng, sg)
            pts = [rand_point(rng, sg) for _ in range(3)]
            L = functional_from_element(a.star() * a, pts, box_window(sg, radius))
            assert truncated_psd_check(L).psd


def test_functional_from_element_requires_real_values():
    with pytest.raises(NotHermitean):
        functional_from_element(SemigroupElement.delta(Z2, 1, 0),
                                [(Fraction(0), Fraction(1))], box_window(Z2, 1))


def test_two_atom_functional_pinned():
    """Half Dirac at z = 1 plus half Dirac at z = i gives (1 + i^(k-n))/2."""
    atoms = [(Fraction(1, 2), (Fraction(1), Fraction(0))),
             (Fraction(1, 2), (Fraction(0), Fraction(1)))]
    L = functional_from_atoms(Z2, atoms, box_window(Z2, 2))
    assert L.value((0, 0)) == GaussianRational(1)
    assert L.value((1, 0)) == GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert L.value((2, 0)) == GaussianRational(0)
    assert L.value((3, 1)) == GaussianRational(0)
    assert truncated_psd_check(L).psd


def test_signed_measure_fails_psd_with_exact_witness():
    atoms = [(Fraction(1), (Fraction(1), Fraction(0))),
             (Fraction(-1, 2), (Fraction(0), Fraction(1)))]
    L = functional_from_atoms(Z2, atoms, box_window(Z2, 1))
    res = truncated_psd_check(L)
    assert not res.psd
    M = moment_matrix(L)
    n = len(M)
    total = GaussianRational(0)
    for i in range(n):
        for j in range(n):
            total = total + res.witness[i].conj() * M[i][j] * res.witness[j]
    assert total.im == 0
    assert total.re == res.witness_value < 0


def test_product_window_covers_squares():
    w = box_window(NPL, 1)
    pw = product_window(NPL, w)
    for s in w:
        ss = NPL.star_key(s)
        for t in w:
            assert (ss[0] + t[0], ss[1] + t[1]) in pw


def test_certify_pinned_small_cases():
    a = SemigroupElement.delta(N0Z, 1, 0) + SemigroupElement.constant(N0Z, 1)
    cert = hermitean_square_certify(a.star() * a)
    assert cert.kind == "semigroup"
    assert cert.semigroup.kind == "N0xZ"
    assert [str(q) for q in cert.squares] == ["1 + (1)*d(1, 0)"]
    assert semigroup_residual(cert).is_zero()


def test_certify_refutes_with_a_character_point():
    e = (SemigroupElement.constant(Z2, 2) + SemigroupElement.delta(Z2, 1, 0)
         + SemigroupElement.delta(Z2, 0, 1))
    res = hermitean_square_certify(e)
    assert isinstance(res, NotPSDWitness)
    assert res.point == (-2, 0)
    assert res.value == -2
    assert element_value(e, res.point) == GaussianRational(res.value)


def test_certify_requires_hermitean():
    with pytest.raises(NotHermitean):
        hermitean_square_certify(SemigroupElement.delta(Z2, 1, 0))


def test_certify_round_trip_each_kind():
    rng = random.Random(93)
    for sg in ALL:
        done = 0
        while done < 6:
            total = SemigroupElement(sg, {})
            for _ in range(rng.randint(1, 2)):
                a = rand_element(rng, sg)
                total = total + a.star() * a
            res = hermitean_square_certify(total)
            assert isinstance(res, SOSCertificate), (sg.kind, res)
            assert semigroup_residual(res).is_zero()
            for q in res.squares:
                assert q.semigroup == sg
            done += 1

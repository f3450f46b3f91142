"""Field arithmetic in Q(lam) with certified signs and enclosures."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from thinsections import polynomials as P
from thinsections.errors import (
    DivisionByZero,
    FieldMismatch,
    NotIsolating,
    NotSquarefree,
)
from thinsections.numberfield import (
    NumberField,
    approximate,
    field_new,
    minimal_field,
    rational_field,
    sign_of,
)

QUARTIC = [-1, 5, -4, -1, 1]  # x^4 - x^3 - 4x^2 + 5x - 1 = (x-1)(x^3-4x+1)
CUBIC = [1, -4, 0, 1]
CUBIC2 = [-1, 12, 8, 1]  # x^3 + 8x^2 + 12x - 1

LAM1 = 0.2541016883650524
LAM2 = 0.0791188645294786


@pytest.fixture(scope="module")
def f1():
    return minimal_field(P.poly(QUARTIC), (Fraction(1, 5), Fraction(3, 10)))


@pytest.fixture(scope="module")
def f2():
    return minimal_field(P.poly(CUBIC2), (Fraction(0), Fraction(1, 2)))


def test_field_new_accepts_squarefree_reducible():
    f = field_new(QUARTIC, (Fraction(1, 5), Fraction(3, 10)))
    assert f.degree == 4
    assert not f.irreducible
    assert abs(float(f.gen) - LAM1) < 1e-12


def test_minimal_field_strips_rational_roots(f1):
    # the quartic is reducible; the working modulus is its cubic factor
    assert f1.modulus == P.poly(CUBIC)
    assert f1.degree == 3
    assert f1.irreducible
    assert abs(float(f1.gen) - LAM1) < 1e-12


def test_second_field_root(f2):
    assert f2.irreducible and f2.degree == 3
    assert abs(float(f2.gen) - LAM2) < 1e-12


def test_field_new_rejections():
    with pytest.raises(NotSquarefree):
        field_new([0, 0, 1], (Fraction(-1), Fraction(1)))  # x^2
    with pytest.raises(NotIsolating):
        field_new([-2, 0, 1], (Fraction(-2), Fraction(2)))  # two roots
    with pytest.raises(NotIsolating):
        field_new([-2, 0, 1], (Fraction(5), Fraction(6)))  # no root
    with pytest.raises(NotIsolating):
        field_new([-1, 1], (Fraction(0), Fraction(1)))  # endpoint is the root


def test_minimal_field_degenerates_to_rational():
    # hint isolates the rational root 1 -> degree-1 field
    f = minimal_field(P.poly(QUARTIC), (Fraction(9, 10), Fraction(11, 10)))
    assert f.degree == 1
    assert float(f.gen) == 1.0


def test_defining_relation(f1, f2):
    lam = f1.gen
    assert (lam ** 3 - 4 * lam + 1).is_zero()
    # the full quartic also vanishes at lam since the cubic divides it
    assert (lam ** 4 - lam ** 3 - 4 * lam ** 2 + 5 * lam - 1).is_zero()
    mu = f2.gen
    assert (mu ** 3 + 8 * mu ** 2 + 12 * mu - 1).is_zero()


def test_reduction_in_quartic_field():
    f = field_new(QUARTIC, (Fraction(1, 5), Fraction(3, 10)))
    lam = f.gen
    assert (lam * lam ** 3 - (lam ** 3 + 4 * lam ** 2 - 5 * lam + 1)).is_zero()


def test_zero_test_in_reducible_modulus():
    # residues that vanish at the tracked root but are not the zero
    # polynomial: detected through the gcd with the modulus
    f = field_new(QUARTIC, (Fraction(1, 5), Fraction(3, 10)))
    cubic_at_lam = f.element(P.poly(CUBIC))
    assert cubic_at_lam.is_zero()
    assert sign_of(cubic_at_lam) == 0
    other_factor = f.element(P.poly([-1, 1]))
    assert not other_factor.is_zero()
    assert sign_of(other_factor) == -1
    # a zero divisor has no inverse in the residue ring
    with pytest.raises(DivisionByZero):
        other_factor.inverse()


def test_sqrt2_field():
    f = field_new([-2, 0, 1], (Fraction(1), Fraction(2)))
    r = f.gen
    assert sign_of(r * r - 2) == 0
    assert sign_of(r - Fraction(3, 2)) < 0
    assert sign_of(r - Fraction(7, 5)) > 0


def test_sign_examples(f1):
    lam = f1.gen
    a = 2 * lam - lam ** 2
    b = lam
    assert sign_of(a - b) > 0
    assert sign_of(f1.zero) == 0
    assert sign_of(-a) < 0


def test_approximate_certified(f1):
    lam = f1.gen
    r = approximate(lam, Fraction(1, 10 ** 6))
    assert abs(float(r) - 0.254) < 5e-4
    assert approximate(f1.zero, Fraction(1, 10)) == 0
    norm = 2 * lam - lam ** 2 + lam + (lam ** 2 - 3 * lam + 1)
    a_scaled = (2 * lam - lam ** 2) / norm
    assert abs(float(approximate(a_scaled, Fraction(1, 10 ** 6))) - 0.444) < 5e-4


def test_enclosure_bounds(f1):
    lam = f1.gen
    x = lam ** 2 - 3 * lam + 1  # = 0.3022626029...
    lo, hi = x.enclosure(Fraction(1, 10 ** 12))
    assert hi - lo < Fraction(1, 10 ** 12)
    lo2, hi2 = x.enclosure(Fraction(1, 10 ** 24))
    assert lo <= lo2 <= hi2 <= hi  # nested certified brackets
    assert abs(float((lo + hi) / 2) - 0.3022626029348131) < 1e-12


def test_comparisons_and_ordering(f1):
    lam = f1.gen
    assert lam < 1
    assert lam > Fraction(1, 4)
    assert lam <= lam
    assert not (lam < lam)
    assert lam == f1.gen
    assert lam != f1.zero


def test_field_mismatch(f1, f2):
    with pytest.raises(FieldMismatch):
        f1.gen + f2.gen


def test_field_equality_and_hash(f1):
    g = minimal_field(P.poly(QUARTIC), (Fraction(1, 5), Fraction(3, 10)))
    assert g == f1
    assert hash(f1.gen) == hash(g.gen + 0)
    # fields over the same modulus but different roots differ
    h1 = NumberField(P.poly(CUBIC), (Fraction(0), Fraction(1)))
    h2 = NumberField(P.poly(CUBIC), (Fraction(1), Fraction(2)))
    assert h1 != h2


def test_hash_requires_irreducible():
    f = field_new(QUARTIC, (Fraction(1, 5), Fraction(3, 10)))
    with pytest.raises(TypeError):
        hash(f.gen)


def test_rational_field_embeds():
    q = rational_field()
    x = q.rational(Fraction(3, 7))
    y = q.rational(Fraction(2, 7))
    assert float(x + y) == pytest.approx(5 / 7)
    assert sign_of(x - y) > 0
    assert (x / y - q.rational(Fraction(3, 2))).is_zero()


coeff = st.fractions(min_value=-9, max_value=9, max_denominator=27)
triple = st.tuples(
    st.lists(coeff, min_size=1, max_size=3),
    st.lists(coeff, min_size=1, max_size=3),
    st.lists(coeff, min_size=1, max_size=3),
)

_F = minimal_field(P.poly(QUARTIC), (Fraction(1, 5), Fraction(3, 10)))


@settings(max_examples=1000)
@given(triple)
def test_field_axioms_randomized(t):
    x, y, z = (_F.element(c) for c in t)
    assert ((x + y) + z - (x + (y + z))).is_zero()
    assert ((x * y) * z - (x * (y * z))).is_zero()
    assert (x * (y + z) - (x * y + x * z)).is_zero()
    assert (x + (-x)).is_zero()
    if not y.is_zero():
        assert ((x * y) / y - x).is_zero()
        assert (y * y.inverse() - _F.one).is_zero()


@settings(max_examples=300)
@given(triple)
def test_sign_compatible_with_arithmetic(t):
    x, y, _ = (_F.element(c) for c in t)
    assume(x.sign() > 0 and y.sign() > 0)
    assert (x * y).sign() > 0
    assert (x + y).sign() > 0


@settings(max_examples=200)
@given(st.lists(coeff, min_size=1, max_size=3))
def test_approximate_consistency(c):
    x = _F.element(c)
    eps = Fraction(1, 1000)
    r1 = approximate(x, eps)
    r2 = approximate(x, eps / 10)
    assert abs(r1 - r2) < eps + eps / 10


@settings(max_examples=200)
@given(st.lists(coeff, min_size=1, max_size=3))
def test_float_matches_enclosure(c):
    x = _F.element(c)
    lo, hi = x.enclosure(Fraction(1, 2 ** 40))
    assert float(lo) - 1e-9 <= float(x) <= float(hi) + 1e-9

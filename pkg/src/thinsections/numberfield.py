"""Exact arithmetic in Q(lam) for a real algebraic lam.

A NumberField is a squarefree integer polynomial (the modulus) plus a
rational interval isolating one of its real roots, the generator lam.
FieldElements are polynomial residues of degree < deg(modulus) with
rational coefficients.  Signs are decided exactly by refining the
isolating interval until interval evaluation excludes zero; the zero
test itself is purely algebraic, so every decision terminates.
"""

from fractions import Fraction

from . import polynomials as P
from .errors import (
    AuditError,
    DivisionByZero,
    FieldMismatch,
    NotIsolating,
    NotSquarefree,
)

_REFINE_CAP = 10 ** 6


class NumberField:
    """Q(lam) with lam the unique root of `modulus` in `root_interval`."""

    def __init__(self, modulus, root_interval, _validated=False):
        modulus = P.poly(modulus)
        lo, hi = Fraction(root_interval[0]), Fraction(root_interval[1])
        if not _validated:
            if P.degree(modulus) < 1:
                raise NotIsolating("modulus has no roots")
            if not P.is_squarefree(modulus):
                raise NotSquarefree(P.to_string(modulus))
            chain = P.sturm_chain(P.monic(modulus))
            if P.evaluate(modulus, lo) == 0 or P.evaluate(modulus, hi) == 0:
                raise NotIsolating("interval endpoint is a root")
            n = P.count_roots(chain, lo, hi)
            if n != 1:
                raise NotIsolating(f"interval contains {n} roots, need exactly 1")
        self.modulus = modulus
        self.degree = P.degree(modulus)
        self._monic = P.monic(modulus)
        self._lo = lo
        self._hi = hi
        # Degree <= 3 with no rational roots is certified irreducible
        # (a reducible cubic or quadratic must have a linear factor).
        self.irreducible = self.degree == 1 or (
            self.degree <= 3 and not P.rational_roots(modulus)
        )
        self.zero = FieldElement(self, ())
        self.one = FieldElement(self, (Fraction(1),))
        self.gen = FieldElement(
            self, P.poly([0, 1]) if self.degree > 1 else P.poly([-modulus[0] / modulus[1]])
        )

    @property
    def root_interval(self):
        return (self._lo, self._hi)

    def refine(self, steps=1):
        """One or more bisection steps on the cached isolating interval."""
        lo, hi = self._lo, self._hi
        if lo == hi:
            return
        flo = P.evaluate(self._monic, lo)
        for _ in range(steps):
            mid = (lo + hi) / 2
            fm = P.evaluate(self._monic, mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        self._lo, self._hi = lo, hi

    def refine_below(self, width):
        while self._hi - self._lo >= width:
            self.refine()

    def element(self, coeffs):
        c = P.poly(coeffs)
        if P.degree(c) >= self.degree:
            c = P.pmod(c, self._monic)
        return FieldElement(self, c)

    def rational(self, q):
        return FieldElement(self, P.poly([Fraction(q)]))

    def __eq__(self, other):
        """Same modulus and same root (intervals refined until decided)."""
        if self is other:
            return True
        if not isinstance(other, NumberField):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        for _ in range(_REFINE_CAP):
            if self._hi < other._lo or other._hi < self._lo:
                return False
            if (other._lo <= self._lo and self._hi <= other._hi) or (
                self._lo <= other._lo and other._hi <= self._hi
            ):
                return True
            self.refine()
            other.refine()
        raise AuditError("field comparison did not converge")

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        lo, hi = self.root_interval
        return f"NumberField({P.to_string(self.modulus)}, root in [{lo}, {hi}])"


def field_new(modulus, hint):
    """Field descriptor for the unique root of `modulus` in `hint`.

    The interval is refined so both endpoints strictly bracket the root.
    """
    f = NumberField(modulus, hint)
    f.refine(4)
    return f


def rational_field():
    """Degree-1 field whose generator is 0; elements are plain rationals."""
    return NumberField(P.poly([0, 1]), (Fraction(-1), Fraction(1)), _validated=True)


def minimal_field(p, hint):
    """Field for a root of p using the smallest certified modulus.

    Strips rational linear factors of the squarefree part.  If the root
    itself is rational the result is a degree-1 field.  The remaining
    factor is certified irreducible when its degree is at most 3.
    """
    q = P.squarefree_part(p)
    lo, hi = Fraction(hint[0]), Fraction(hint[1])
    for r in P.rational_roots(q):
        if lo < r < hi:
            return NumberField(P.poly([-r, 1]), (r - 1, r + 1), _validated=True)
        q = P.deflate(q, r)
    return field_new(q, (lo, hi))


class FieldElement:
    """A residue polynomial evaluated at the field generator."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = P.poly(coeffs)
        self._hash = None

    # -- construction helpers -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, P.add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, P.neg(self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, P.sub(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, P.pmod(P.mul(self.coeffs, o.coeffs), self.field._monic))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("zero element")
        m = self.field._monic
        # Extended Euclid on (coeffs, modulus).
        r0, r1 = self.coeffs, m
        s0, s1 = P.ONE, P.ZERO
        while not P.is_zero(r1):
            q, r = P.divmod_poly(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, P.sub(s0, P.mul(q, s1))
        if P.degree(r0) > 0:
            # Nonzero at lam but not invertible mod a reducible modulus.
            raise DivisionByZero(
                "element shares a factor with the modulus; rebuild the field "
                "with the minimal modulus (see minimal_field)"
            )
        inv = P.scale(s0, 1 / r0[0])
        return FieldElement(self.field, P.pmod(inv, m))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # -- decisions ---------------------------------------------------------------

    def is_zero(self):
        if P.is_zero(self.coeffs):
            return True
        if self.field.irreducible:
            return False
        g = P.gcd(self.coeffs, self.field._monic)
        if P.degree(g) < 1:
            return False
        lo, hi = self.field.root_interval
        if lo == hi:
            return P.evaluate(g, lo) == 0
        chain = P.sturm_chain(P.squarefree_part(g))
        return P.count_roots(chain, lo, hi) > 0

    def sign(self):
        """Exact sign of the real number this element represents."""
        if self.is_zero():
            return 0
        if P.degree(self.coeffs) == 0:
            return 1 if self.coeffs[0] > 0 else -1
        f = self.field
        for _ in range(_REFINE_CAP):
            lo, hi = f.root_interval
            vlo, vhi = P.evaluate_interval(self.coeffs, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            f.refine()
        raise AuditError("sign refinement did not converge")

    def enclosure(self, width):
        """Certified rational interval of width < `width` containing the value."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        f = self.field
        for _ in range(_REFINE_CAP):
            lo, hi = f.root_interval
            vlo, vhi = P.evaluate_interval(self.coeffs, lo, hi)
            if vhi - vlo < width:
                return vlo, vhi
            f.refine()
        raise AuditError("enclosure refinement did not converge")

    def approximate(self, eps):
        """A rational r with |r - value| < eps, certified."""
        vlo, vhi = self.enclosure(Fraction(eps) * 2)
        return (vlo + vhi) / 2

    def __float__(self):
        vlo, vhi = self.enclosure(Fraction(1, 2 ** 56))
        return float((vlo + vhi) / 2)

    # -- comparisons ---------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).is_zero()

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __hash__(self):
        if self._hash is None:
            if not self.field.irreducible:
                raise TypeError(
                    "elements over a reducible modulus have no canonical "
                    "residue and are unhashable"
                )
            self._hash = hash((self.field.modulus, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"<{P.to_string(self.coeffs, 'lam')}>"


def sign_of(x):
    return x.sign()


def approximate(x, eps):
    return x.approximate(eps)

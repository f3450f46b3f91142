"""Exact dense linear algebra over the rationals and over number fields.

Matrices here are small (nothing above 5x5 in the bundled systems), so
everything is plain dense arithmetic: characteristic polynomials via
the Faddeev-LeVerrier recursion, kernels via Gaussian elimination with
exact pivot decisions, and Perron roots via real root isolation.
"""

import warnings
from fractions import Fraction

from . import polynomials as P
from .errors import NegativeEntries, NotAnEigenvalue, NotSquare


class RatMatrix:
    """Dense rational matrix, entries row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        entries = tuple(Fraction(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows):
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __mul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            out = []
            for i in range(self.rows):
                ri = self.row(i)
                for j in range(other.cols):
                    out.append(
                        sum(
                            (ri[k] * other[k, j] for k in range(self.cols)),
                            Fraction(0),
                        )
                    )
            return RatMatrix(self.rows, other.cols, out)
        return RatMatrix(self.rows, self.cols, [a * Fraction(other) for a in self.entries])

    __rmul__ = __mul__

    def scale(self, s):
        s = Fraction(s)
        return RatMatrix(self.rows, self.cols, [a * s for a in self.entries])

    def transpose(self):
        return RatMatrix(
            self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)]
        )

    def apply(self, vec):
        """Matrix times a vector of anything supporting + and *."""
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            acc = vec[0] * ri[0]
            for k in range(1, self.cols):
                acc = acc + vec[k] * ri[k]
            out.append(acc)
        return out

    def trace(self):
        if self.rows != self.cols:
            raise NotSquare("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def is_square(self):
        return self.rows == self.cols

    def __repr__(self):
        return f"RatMatrix({self.to_rows()})"


def char_poly(m):
    """det(xI - M), exact, monic; Faddeev-LeVerrier recursion."""
    if not m.is_square():
        raise NotSquare("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = RatMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m * mk
        ck = -mk.trace() / k
        coeffs[n - k] = ck
        mk = mk + RatMatrix.identity(n).scale(ck)
    return P.poly(coeffs)


def mat_over_field(m, field):
    """Rows of FieldElements from a rational matrix."""
    return [[field.rational(x) for x in m.row(i)] for i in range(m.rows)]


def kernel_basis(rows):
    """Kernel basis of a square matrix given as rows of FieldElements.

    Gaussian elimination with exact zero tests; returns a list of basis
    vectors (each a list of FieldElements).
    """
    if not rows:
        return []
    field = rows[0][0].field
    n = len(rows)
    cols = len(rows[0])
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, n):
            if not a[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * cols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def eigen_kernel(m, mu, unit_sum_indices=None):
    """A nonzero v with (M - mu*I)v = 0, exact over mu's field.

    Normalized so the designated coordinates sum to 1 (by default the
    first min(3, n) coordinates, matching the bundled systems whose
    eigenvectors are pinned by a unit sum of the first three entries).
    Raises NotAnEigenvalue when the kernel is trivial; if the kernel has
    dimension above 1 a warning is emitted and the first basis vector
    is returned.
    """
    if not m.is_square():
        raise NotSquare("eigen kernel of a non-square matrix")
    field = mu.field
    n = m.rows
    rows = mat_over_field(m, field)
    for i in range(n):
        rows[i][i] = rows[i][i] - mu
    basis = kernel_basis(rows)
    if not basis:
        raise NotAnEigenvalue("kernel is trivial")
    if len(basis) > 1:
        warnings.warn(f"kernel dimension {len(basis)} > 1; returning first basis vector")
    v = basis[0]
    if unit_sum_indices is None:
        unit_sum_indices = tuple(range(min(3, n)))
    s = field.zero
    for i in unit_sum_indices:
        s = s + v[i]
    if s.is_zero():
        raise NotAnEigenvalue("designated coordinates sum to zero; cannot normalize")
    inv = s.inverse()
    return [x * inv for x in v]


def perron_root(m, eps):
    """Rational approximation within eps of the largest real eigenvalue."""
    if not m.is_square():
        raise NotSquare("Perron root of a non-square matrix")
    if any(e < 0 for e in m.entries):
        raise NegativeEntries("matrix must be entrywise nonnegative")
    eps = Fraction(eps)
    cp = char_poly(m)
    intervals = P.isolate_real_roots(cp)
    if not intervals:
        raise NotAnEigenvalue("no real eigenvalues")
    lo, hi = intervals[-1]
    lo, hi = P.refine_root(P.squarefree_part(cp), lo, hi, eps) if lo != hi else (lo, hi)
    return (lo + hi) / 2


def perron_root_interval(m, eps):
    """Certified rational interval of width < eps around the largest real eigenvalue."""
    if not m.is_square():
        raise NotSquare("Perron root of a non-square matrix")
    if any(e < 0 for e in m.entries):
        raise NegativeEntries("matrix must be entrywise nonnegative")
    eps = Fraction(eps)
    cp = char_poly(m)
    intervals = P.isolate_real_roots(cp)
    if not intervals:
        raise NotAnEigenvalue("no real eigenvalues")
    lo, hi = intervals[-1]
    if lo == hi:
        return lo, hi
    return P.refine_root(P.squarefree_part(cp), lo, hi, eps)

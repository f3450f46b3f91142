"""Triply periodic piecewise-linear surfaces built from identification data.

The surface lives in R^3 and is invariant under a rank-3 lattice.  A
fundamental portion consists of two horizontal plates (rectangles with
two rectangular holes each, at heights 1/4 and 3/4) and three vertical
tubes (boundaries of the hole rectangles swept over an x3-interval).
All coordinates are exact number-field elements; floats only enter
when a caller asks for them.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import AuditError, InvalidSystem
from .iis import system_field, system_params

__all__ = [
    "Rect",
    "Plate",
    "Wall",
    "PLSurface",
    "SaddleReport",
    "build_surface",
    "saddle_levels",
    "central_symmetry_point",
    "check_central_symmetry",
    "euler_characteristic",
]


class Rect:
    """Axis-parallel rectangle [x1_lo, x1_hi] x [x2_lo, x2_hi], exact ends."""

    __slots__ = ("x1", "x2")

    def __init__(self, x1, x2):
        lo1, hi1 = x1
        lo2, hi2 = x2
        if not (hi1 - lo1).sign() > 0 or not (hi2 - lo2).sign() > 0:
            raise InvalidSystem("rectangle sides must have positive length")
        self.x1 = (lo1, hi1)
        self.x2 = (lo2, hi2)

    def translated(self, d1, d2):
        return Rect((self.x1[0] + d1, self.x1[1] + d1), (self.x2[0] + d2, self.x2[1] + d2))

    def reflected(self, c1, c2):
        """Image under the point reflection x -> 2c - x of the plane."""
        two = 2
        return Rect(
            (two * c1 - self.x1[1], two * c1 - self.x1[0]),
            (two * c2 - self.x2[1], two * c2 - self.x2[0]),
        )

    def same_as(self, other):
        return all(
            (a - b).is_zero()
            for a, b in zip(self.x1 + self.x2, other.x1 + other.x2)
        )

    def strictly_inside(self, other):
        return (
            (self.x1[0] - other.x1[0]).sign() > 0
            and (other.x1[1] - self.x1[1]).sign() > 0
            and (self.x2[0] - other.x2[0]).sign() > 0
            and (other.x2[1] - self.x2[1]).sign() > 0
        )

    def disjoint_from(self, other):
        return (
            (self.x1[1] - other.x1[0]).sign() <= 0
            or (other.x1[1] - self.x1[0]).sign() <= 0
            or (self.x2[1] - other.x2[0]).sign() <= 0
            or (other.x2[1] - self.x2[0]).sign() <= 0
        )

    def __repr__(self):
        f = lambda v: round(float(v), 6)
        return "Rect([%s, %s] x [%s, %s])" % (
            f(self.x1[0]), f(self.x1[1]), f(self.x2[0]), f(self.x2[1]))


@dataclass(frozen=True)
class Plate:
    """Horizontal piece: outer rectangle minus holes, at height ``level``."""

    outer: Rect
    holes: tuple
    level: object


@dataclass(frozen=True)
class Wall:
    """One flat face of a vertical tube.

    ``orient`` is "v" for a face in a plane x1 = const (the section-visible
    kind) or "h" for a face in a plane x2 = const (a tangency face of the
    height function x2).  ``fixed`` is the constant coordinate, ``span`` the
    extent in the other horizontal coordinate, ``x3`` the height interval.
    """

    orient: str
    fixed: object
    span: tuple
    x3: tuple


@dataclass(frozen=True)
class PLSurface:
    field: object
    plates: tuple
    walls: tuple
    lattice: tuple
    label: str

    @property
    def plate_period(self):
        """Height of the plate rectangle; equals the x2-shift of e2 - e1."""
        return self.plates[0].outer.x2[1] - self.plates[0].outer.x2[0]


def _tube_walls(rect, z):
    z0, z1 = z
    (l, r), (b, t) = rect.x1, rect.x2
    return (
        Wall("v", l, (b, t), (z0, z1)),
        Wall("v", r, (b, t), (z0, z1)),
        Wall("h", b, (l, r), (z0, z1)),
        Wall("h", t, (l, r), (z0, z1)),
    )


def _assemble(field, a, b, c, y2, y4, label):
    q = lambda p: field.rational(Fraction(*p))
    one, zero = q((1, 1)), q((0, 1))
    height = a + b + 2 * c
    outer = Rect((zero, one), (zero, height))
    t2 = Rect((q((1, 5)), q((2, 5))), (y2, y2 + c))
    t3 = Rect((q((3, 5)), q((4, 5))), (a, a + c))
    t4 = Rect((q((1, 5)), q((2, 5))), (y4, y4 + c))
    for hole_pair in ((t2, t3), (t3, t4)):
        for hole in hole_pair:
            if not hole.strictly_inside(outer):
                raise InvalidSystem("tube rectangle leaves the plate")
        if not hole_pair[0].disjoint_from(hole_pair[1]):
            raise InvalidSystem("tube rectangles overlap inside a plate")
    plates = (
        Plate(outer, (t2, t3), q((1, 4))),
        Plate(outer, (t3, t4), q((3, 4))),
    )
    walls = (
        _tube_walls(t2, (zero, q((1, 4))))
        + _tube_walls(t3, (q((1, 4)), q((3, 4))))
        + _tube_walls(t4, (q((3, 4)), one))
    )
    lattice = (
        (one, -(b + c), zero),
        (one, a + c, zero),
        (zero, y4 - y2, one),
    )
    return PLSurface(field, plates, walls, lattice, label)


def build_surface(example):
    """Assemble one of the two bundled surfaces from exact system data.

    Example 1 places the tube rectangles at x2-ranges [y2, y2+c] with
    y2 = u and y4 = a+b-u, the two intervals of the third pair.  Example 2
    reuses the template with the second system's third pair [d, d+c] and
    [e, e+c]; its original source records only the identification data, so
    the rectangle placement here is a reconstruction, not a transcription.
    """
    if example == 1:
        field = system_field("s1")
        a, b, c, u = system_params("s1")
        return _assemble(field, a, b, c, u, a + b - u, "example-1")
    if example == 2:
        field = system_field("s2")
        a, b, c, d, e = system_params("s2")
        return _assemble(field, a, b, c, d, e, "example-2")
    raise InvalidSystem("unknown surface example %r" % (example,))


# -- saddle data ----------------------------------------------------------


@dataclass(frozen=True)
class SaddleReport:
    """Tangency levels of the height function x2.

    ``distinct`` compares the listed values pairwise as real numbers.
    ``classes`` partitions the indices by congruence modulo the group of
    x2-components of lattice vectors; two tangency faces in one class lie
    on a common leaf of the plane foliation in the quotient 3-torus even
    though their fundamental-domain levels differ.
    """

    values: tuple
    distinct: bool
    classes: tuple


def _rational_coeffs(x, dim):
    cs = list(x.coeffs) + [Fraction(0)] * dim
    return [Fraction(c) for c in cs[:dim]]


def _solve_rational(mat, rhs):
    """Solve a square rational system; return None if singular."""
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [v / inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def x2_shift_coefficients(surface, value):
    """Integer (k1, k2, k3) with value = sum k_i * x2(e_i), or None.

    The bundled lattices have x2-components whose coefficient vectors over
    the field basis form a unimodular matrix, so membership in the shift
    group reduces to an exact linear solve.
    """
    if value.is_zero():
        return (0, 0, 0)
    dim = max(len(surface.field._monic) - 1, 1)
    cols = [_rational_coeffs(e[1], dim) for e in surface.lattice]
    if dim != 3:
        raise AuditError("shift-group test expects a cubic field")
    mat = [[cols[j][i] for j in range(3)] for i in range(3)]
    sol = _solve_rational(mat, _rational_coeffs(value, dim))
    if sol is None or any(s.denominator != 1 for s in sol):
        return None
    ks = tuple(int(s) for s in sol)
    check = sum((surface.lattice[i][1] * ks[i] for i in range(3)), surface.field.zero)
    if not (check - value).is_zero():
        raise AuditError("shift certificate failed to reproduce the value")
    return ks


def saddle_levels(surface):
    values = tuple(w.fixed for w in surface.walls if w.orient == "h")
    distinct = True
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if (values[i] - values[j]).is_zero():
                distinct = False
    classes = []
    for i, v in enumerate(values):
        for cls in classes:
            if x2_shift_coefficients(surface, v - values[cls[0]]) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    return SaddleReport(values, distinct, tuple(tuple(c) for c in classes))


# -- central symmetry ------------------------------------------------------


def central_symmetry_point(surface):
    """The fixed point (1/2, (y2 + a + c)/2, 1/4) of the surface's point
    reflection, read off from the plate holes: y2 + a + c is the sum of the
    lower tube's bottom edge and the middle tube's top edge."""
    field = surface.field
    half = field.rational(Fraction(1, 2))
    lower, middle = surface.plates[0].holes
    p2 = (lower.x2[0] + middle.x2[1]) * half
    return (half, p2, field.rational(Fraction(1, 4)))


def _plate_rects(plate):
    """Decompose outer-minus-holes into exact rectangles (vertical strips)."""
    cuts = [plate.outer.x1[0], plate.outer.x1[1]]
    for h in plate.holes:
        cuts.extend(h.x1)
    cuts.sort(key=float)
    dedup = [cuts[0]]
    for v in cuts[1:]:
        if not (v - dedup[-1]).is_zero():
            dedup.append(v)
    rects = []
    for lo, hi in zip(dedup, dedup[1:]):
        mid_blocks = sorted(
            (h.x2 for h in plate.holes
             if (h.x1[0] - lo).sign() <= 0 and (hi - h.x1[1]).sign() <= 0),
            key=lambda yy: float(yy[0]),
        )
        y = plate.outer.x2[0]
        for b0, b1 in mid_blocks:
            if (b0 - y).sign() > 0:
                rects.append(((lo, hi), (y, b0)))
            y = b1
        if (plate.outer.x2[1] - y).sign() > 0:
            rects.append(((lo, hi), (y, plate.outer.x2[1])))
    return rects


def _faces(surface):
    """Flatten the surface into axis-plane faces (axis, value, u-range, v-range).

    axis "z": plate pieces, coordinates (u, v) = (x1, x2)
    axis "x": vertical tube faces, (u, v) = (x2, x3)
    axis "y": tangency tube faces, (u, v) = (x1, x3)
    """
    out = []
    for plate in surface.plates:
        for u, v in _plate_rects(plate):
            out.append(("z", plate.level, u, v))
    for w in surface.walls:
        axis = "x" if w.orient == "v" else "y"
        out.append((axis, w.fixed, w.span, w.x3))
    return out


def _floor_towards(value, unit):
    """Largest integer n with n*unit <= value, by float guess + exact check."""
    n = int(float(value) // float(unit))
    while (value - (n + 1) * unit).sign() >= 0:
        n += 1
    while (value - n * unit).sign() < 0:
        n -= 1
    return n


def _split_range(lo, hi, unit):
    """Split [lo, hi] at multiples of ``unit`` (width at most one period)."""
    n = _floor_towards(lo, unit)
    cut = (n + 1) * unit
    if (hi - cut).sign() <= 0:
        return [(n, lo, hi)]
    return [(n, lo, cut), (n + 1, cut, hi)]


def _canonical_faces(surface, faces):
    """Translate faces into the fundamental cell, splitting where they wrap.

    Lattice translations act on a face by shifting its plane value and
    ranges; e1 and e3 shifts also move the x2 coordinate, which is the
    plane value for "y" faces and the u or v range otherwise.
    """
    field = surface.field
    one = field.rational(1)
    period = surface.plate_period
    e1y = surface.lattice[0][1]
    e3y = surface.lattice[2][1]
    out = []
    for axis, value, u, v in faces:
        if axis == "z":
            k3 = _floor_towards(value, one)
            pieces = [(value - k3, u, (v[0] - k3 * e3y, v[1] - k3 * e3y))]
            split = []
            for val, (u0, u1), vv in pieces:
                for k1, s0, s1 in _split_range(u0, u1, one):
                    split.append((val, (s0 - k1, s1 - k1),
                                  (vv[0] - k1 * e1y, vv[1] - k1 * e1y)))
            for val, uu, (v0, v1) in split:
                for m, s0, s1 in _split_range(v0, v1, period):
                    out.append(("z", val, uu, (s0 - m * period, s1 - m * period)))
        elif axis == "x":
            k1 = _floor_towards(value, one)
            val = value - k1
            u = (u[0] - k1 * e1y, u[1] - k1 * e1y)
            for k3, s0, s1 in _split_range(v[0], v[1], one):
                uu = (u[0] - k3 * e3y, u[1] - k3 * e3y)
                for m, t0, t1 in _split_range(uu[0], uu[1], period):
                    out.append(("x", val, (t0 - m * period, t1 - m * period),
                                (s0 - k3, s1 - k3)))
        else:
            for k1, u0, u1 in _split_range(u[0], u[1], one):
                val1 = value - k1 * e1y
                for k3, v0, v1 in _split_range(v[0], v[1], one):
                    val2 = val1 - k3 * e3y
                    m = _floor_towards(val2, period)
                    out.append(("y", val2 - m * period,
                                (u0 - k1, u1 - k1), (v0 - k3, v1 - k3)))
    return out


def _dedup_sorted(vals):
    vals = sorted(vals, key=float)
    kept = [vals[0]]
    for v in vals[1:]:
        if not (v - kept[-1]).is_zero():
            kept.append(v)
    return kept


def _atom_set(rects, cuts_u, cuts_v):
    covered = set()
    for (u0, u1), (v0, v1) in rects:
        for i in range(len(cuts_u) - 1):
            if (cuts_u[i] - u0).sign() < 0 or (u1 - cuts_u[i + 1]).sign() < 0:
                continue
            for j in range(len(cuts_v) - 1):
                if (cuts_v[j] - v0).sign() >= 0 and (v1 - cuts_v[j + 1]).sign() >= 0:
                    covered.add((i, j))
    return covered


def _same_union(rects_a, rects_b):
    if not rects_a or not rects_b:
        return not rects_a and not rects_b
    cuts_u = _dedup_sorted([r[0][0] for r in rects_a + rects_b]
                           + [r[0][1] for r in rects_a + rects_b])
    cuts_v = _dedup_sorted([r[1][0] for r in rects_a + rects_b]
                           + [r[1][1] for r in rects_a + rects_b])
    return _atom_set(rects_a, cuts_u, cuts_v) == _atom_set(rects_b, cuts_u, cuts_v)


def _group_by_plane(faces):
    groups = []
    for axis, value, u, v in faces:
        for key, rects in groups:
            if key[0] == axis and (key[1] - value).is_zero():
                rects.append((u, v))
                break
        else:
            groups.append(((axis, value), [(u, v)]))
    return groups


def check_central_symmetry(surface, point):
    """Whether x -> 2*point - x maps the surface to itself mod the lattice.

    Faces are reflected, translated back into the fundamental cell, and
    compared plane by plane as exact unions of rectangles, so pieces that
    the reflection shears across cell boundaries still match.
    """
    p1, p2, p3 = point
    centers = {"z": (p1, p2, p3), "x": (p2, p3, p1), "y": (p1, p3, p2)}
    reflected = []
    for axis, value, u, v in _faces(surface):
        cu, cv, cw = centers[axis]
        reflected.append((
            axis,
            2 * cw - value,
            (2 * cu - u[1], 2 * cu - u[0]),
            (2 * cv - v[1], 2 * cv - v[0]),
        ))
    original = _group_by_plane(_canonical_faces(surface, _faces(surface)))
    image = _group_by_plane(_canonical_faces(surface, reflected))
    if len(original) != len(image):
        return False
    for key, rects in original:
        for ikey, irects in image:
            if ikey[0] == key[0] and (ikey[1] - key[1]).is_zero():
                if not _same_union(rects, irects):
                    return False
                break
        else:
            return False
    return True


# -- closed-surface bookkeeping ---------------------------------------------


def _reassemble_tubes(surface):
    """Group wall faces back into tubes; audit that each tube closes up."""
    by_interval = {}
    for w in surface.walls:
        key = (float(w.x3[0]), float(w.x3[1]))
        by_interval.setdefault(key, []).append(w)
    tubes = []
    for group in by_interval.values():
        vs = sorted((w for w in group if w.orient == "v"), key=lambda w: float(w.fixed))
        hs = sorted((w for w in group if w.orient == "h"), key=lambda w: float(w.fixed))
        if len(vs) != 2 or len(hs) != 2:
            raise AuditError("tube does not have two pairs of opposite faces")
        l, r = vs[0].fixed, vs[1].fixed
        b, t = hs[0].fixed, hs[1].fixed
        for w in vs:
            if not (w.span[0] - b).is_zero() or not (w.span[1] - t).is_zero():
                raise AuditError("vertical tube faces do not meet the horizontal ones")
        for w in hs:
            if not (w.span[0] - l).is_zero() or not (w.span[1] - r).is_zero():
                raise AuditError("horizontal tube faces do not meet the vertical ones")
        tubes.append((Rect((l, r), (b, t)), vs[0].x3))
    return tubes


def _lattice_translates(surface, bound=2):
    field = surface.field
    e1, e2, e3 = surface.lattice
    rng = range(-bound, bound + 1)
    for k1 in rng:
        for k2 in rng:
            for k3 in rng:
                yield (
                    (k1, k2, k3),
                    tuple(k1 * e1[i] + k2 * e2[i] + k3 * e3[i] for i in range(3)),
                )


def euler_characteristic(surface):
    """Euler characteristic of the closed quotient surface.

    Audits the gluing pattern: each plate closes into a torus-with-holes
    under the horizontal lattice, every tube end is matched either by a
    plate hole at its height or by another tube end shifted by a lattice
    vector, and nothing is matched twice.  The characteristic is then the
    hole count of the plates with the sign flipped, tubes contributing
    zero.
    """
    field = surface.field
    one = field.rational(1)
    period = surface.plate_period
    e1, e2 = surface.lattice[0], surface.lattice[1]
    if not (e1[0] - one).is_zero() or not (e2[0] - one).is_zero():
        raise AuditError("plate lattice must shift x1 by exactly one")
    if not (e2[1] - e1[1] - period).is_zero():
        raise AuditError("x2-period of the lattice must match the plate height")
    for plate in surface.plates:
        if not (plate.outer.x1[1] - plate.outer.x1[0] - one).is_zero():
            raise AuditError("plate width must equal the x1-period")
        for h in plate.holes:
            if not h.strictly_inside(plate.outer):
                raise AuditError("plate hole touches the outer boundary")

    circles = []
    for rect, (z0, z1) in _reassemble_tubes(surface):
        circles.append([rect, z0, None])
        circles.append([rect, z1, None])
    holes = []
    for pi, plate in enumerate(surface.plates):
        for h in plate.holes:
            holes.append([h, plate.level, pi, None])

    translates = list(_lattice_translates(surface))
    for ci, (rect, z, _) in enumerate(circles):
        for hole in holes:
            if (hole[1] - z).is_zero() and hole[0].same_as(rect):
                if hole[3] is not None or circles[ci][2] is not None:
                    raise AuditError("boundary circle glued twice")
                hole[3] = ci
                circles[ci][2] = ("plate", hole[2])
        for cj in range(ci + 1, len(circles)):
            orect, oz, _ = circles[cj]
            for ks, vec in translates:
                if ks == (0, 0, 0):
                    continue
                if not (z + vec[2] - oz).is_zero():
                    continue
                if orect.same_as(rect.translated(vec[0], vec[1])):
                    if circles[ci][2] is not None or circles[cj][2] is not None:
                        raise AuditError("boundary circle glued twice")
                    circles[ci][2] = ("tube", cj)
                    circles[cj][2] = ("tube", ci)
    if any(c[2] is None for c in circles):
        raise AuditError("unmatched tube end; the surface is not closed")
    if any(h[3] is None for h in holes):
        raise AuditError("unmatched plate hole; the surface is not closed")
    return -sum(len(p.holes) for p in surface.plates)

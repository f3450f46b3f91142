"""Interval identification systems and the Rauzy induction.

A system is a support interval [A, B] plus n unordered pairs of
width-matched closed subintervals; each pair is identified by the
orientation preserving affine isometry (a translation) between its two
intervals.  All endpoints are exact field elements; every predicate
below is decided exactly.

Moves: a transmission re-bases one interval of a pair through another
pair; a reduction cuts off a singly covered end of the support.  One
induction step on a side is the admissible transmission on that side
followed by the reduction on the same side when its precondition
holds.  Iterating the steps on a thin system shrinks the support
forever; detect_self_similarity searches move schedules that reproduce
the start system scaled by an exact contraction factor.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import polynomials as P
from .errors import (
    AmbiguousMove,
    InvalidSystem,
    NoAdmissibleMove,
    NotContained,
    OutOfSupport,
    PreconditionFailed,
    SelfTransmission,
)
from .linalg import RatMatrix, char_poly, eigen_kernel
from .numberfield import minimal_field

LEFT = "left"
RIGHT = "right"

# Parameter matrices of the two bundled order-3 systems.  Each has a
# unique real eigenvalue in (0, 1); the eigenvector coordinates with
# unit sum of the first three entries are the interval lengths.
SYSTEM_MATRIX = {
    "s1": RatMatrix.from_rows(
        [[3, 1, -1, -4], [-1, 2, 0, 0], [-2, -2, 1, 4], [3, 2, -1, -5]]
    ),
    "s2": RatMatrix.from_rows(
        [
            [-2, 2, 1, 0, 1],
            [2, -5, -2, 3, -2],
            [1, 0, 0, -1, 0],
            [1, -2, -1, 1, 0],
            [0, -2, -2, 3, -2],
        ]
    ),
}

_ROOT_HINT = {"s1": (Fraction(1, 5), Fraction(3, 10)), "s2": (Fraction(0), Fraction(1, 2))}

_FIELD_CACHE = {}


class IntervalPair:
    """Two width-matched closed subintervals identified by a translation.

    `left` and `right` name the storage order, not positions on the line.
    """

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = tuple(left)
        self.right = tuple(right)
        (a, b), (c, d) = self.left, self.right
        w1 = b - a
        if w1.sign() <= 0:
            raise InvalidSystem("interval width must be positive")
        if not (w1 - (d - c)).is_zero():
            raise InvalidSystem("pair widths differ")

    @property
    def width(self):
        return self.left[1] - self.left[0]

    def interval(self, side):
        return self.left if side == LEFT else self.right

    def other(self, side):
        return self.right if side == LEFT else self.left

    def intervals(self):
        return (self.left, self.right)

    def canonical(self):
        (a, b), (c, d) = self.left, self.right
        if (c - a).sign() < 0 or ((c - a).is_zero() and (d - b).sign() < 0):
            return (c, d, a, b)
        return (a, b, c, d)

    def __repr__(self):
        return f"[{float(self.left[0]):.4f},{float(self.left[1]):.4f}]<->[{float(self.right[0]):.4f},{float(self.right[1]):.4f}]"


class IIS:
    """Support interval plus identified interval pairs, all exact."""

    __slots__ = ("field", "support", "pairs")

    def __init__(self, field, support, pairs):
        self.field = field
        self.support = tuple(support)
        self.pairs = tuple(pairs)
        a, b = self.support
        if (b - a).sign() <= 0:
            raise InvalidSystem("support must have positive length")
        for p in self.pairs:
            for lo, hi in p.intervals():
                if (lo - a).sign() < 0 or (b - hi).sign() < 0:
                    raise InvalidSystem("subinterval escapes the support")

    @property
    def order(self):
        return len(self.pairs)

    def width(self):
        return self.support[1] - self.support[0]

    def intervals(self):
        """All (pair index, side, (lo, hi)) triples."""
        out = []
        for i, p in enumerate(self.pairs):
            out.append((i, LEFT, p.left))
            out.append((i, RIGHT, p.right))
        return out

    def canonical_key(self):
        """Hashable exact signature: support + sorted canonical pairs.

        Valid for fields with canonical residues (irreducible modulus).
        """
        cps = _value_sorted([p.canonical() for p in self.pairs])
        return (
            tuple(x.coeffs for x in self.support),
            tuple(tuple(x.coeffs for x in t) for t in cps),
        )

    def __repr__(self):
        lo, hi = self.support
        body = "; ".join(repr(p) for p in self.pairs)
        return f"IIS([{float(lo):.4f},{float(hi):.4f}]; {body})"


def _value_sorted(tuples):
    import functools

    def cmp(s, t):
        for x, y in zip(s, t):
            sg = (x - y).sign()
            if sg:
                return sg
        return 0

    return sorted(tuples, key=functools.cmp_to_key(cmp))


def system_field(name):
    """The number field of a bundled system, built from its matrix."""
    if name not in _FIELD_CACHE:
        cp = char_poly(SYSTEM_MATRIX[name])
        field = minimal_field(cp, _ROOT_HINT[name])
        field.refine_below(Fraction(1, 2 ** 128))
        _FIELD_CACHE[name] = field
    return _FIELD_CACHE[name]


def system_params(name):
    """Eigenvector coordinates of a bundled system, unit sum on the
    first three entries."""
    field = system_field(name)
    return eigen_kernel(SYSTEM_MATRIX[name], field.gen)


def build_system(spec):
    """Construct a system: "s1", "s2", or an explicit mapping."""
    if isinstance(spec, IIS):
        return spec
    if isinstance(spec, dict):
        from .serialize import iis_from_json

        return iis_from_json(spec)
    name = spec.lower()
    if name not in SYSTEM_MATRIX:
        raise InvalidSystem(f"unknown system {spec!r}")
    field = system_field(name)
    params = system_params(name)
    zero = field.zero
    if name == "s1":
        a, b, c, u = params
        support = (zero, a + b + c)
        pairs = (
            IntervalPair((zero, a), (b + c, a + b + c)),
            IntervalPair((zero, b), (a + c, a + b + c)),
            IntervalPair((u, u + c), (a + b - u, a + b + c - u)),
        )
    else:
        a, b, c, d, e = params
        support = (zero, a + b + c)
        pairs = (
            IntervalPair((zero, a), (b + c, a + b + c)),
            IntervalPair((zero, b), (a + c, a + b + c)),
            IntervalPair((d, d + c), (e, e + c)),
        )
    return IIS(field, support, pairs)


def validate(s):
    """Exact balanced / symmetric predicates."""
    a0, b0 = s.support
    starts = [iv[0] for _, _, iv in s.intervals()]
    ends = [iv[1] for _, _, iv in s.intervals()]
    lo = starts[0]
    for x in starts[1:]:
        if (x - lo).sign() < 0:
            lo = x
    hi = ends[0]
    for x in ends[1:]:
        if (x - hi).sign() > 0:
            hi = x
    total = s.field.zero
    for p in s.pairs:
        total = total + p.width
    balanced = (
        (lo - a0).is_zero()
        and (hi - b0).is_zero()
        and (total - (b0 - a0)).is_zero()
    )
    symmetric = True
    for p in s.pairs:
        (pa, pb), (pc, pd) = p.left, p.right
        # The reflection x -> A + B - x must carry one interval of the
        # pair exactly onto the other.
        direct = ((a0 + b0 - pb) - pc).is_zero() and ((a0 + b0 - pa) - pd).is_zero()
        if not direct:
            symmetric = False
            break
    return {"balanced": balanced, "symmetric": symmetric}


def _contains(outer, inner):
    return (inner[0] - outer[0]).sign() >= 0 and (outer[1] - inner[1]).sign() >= 0


def transmit(s, i, j, which_side_of_j, which_of_i=None):
    """Re-base one interval of pair i through pair j.

    The moved interval of pair i must be contained in pair j's interval
    on `which_side_of_j`; it is replaced by its image under pair j's
    translation onto the other interval of j.  When both intervals of
    pair i are contained, `which_of_i` must disambiguate.
    """
    if i == j:
        raise SelfTransmission("cannot transmit a pair through itself")
    pj = s.pairs[j]
    target = pj.interval(which_side_of_j)
    dest = pj.other(which_side_of_j)
    pi = s.pairs[i]
    if which_of_i is None:
        inside = [side for side in (LEFT, RIGHT) if _contains(target, pi.interval(side))]
        if not inside:
            raise NotContained("no interval of pair i lies inside the target")
        if len(inside) == 2 and not _same_interval(pi.left, pi.right):
            raise NotContained(
                "both intervals of pair i lie inside the target; pass which_of_i"
            )
        which_of_i = inside[0]
    moved = pi.interval(which_of_i)
    if not _contains(target, moved):
        raise NotContained("interval of pair i is not inside the target")
    shift = dest[0] - target[0]
    image = (moved[0] + shift, moved[1] + shift)
    new_pair = (
        IntervalPair(image, pi.right) if which_of_i == LEFT else IntervalPair(pi.left, image)
    )
    pairs = list(s.pairs)
    pairs[i] = new_pair
    return IIS(s.field, s.support, pairs)


def _same_interval(u, v):
    return (u[0] - v[0]).is_zero() and (u[1] - v[1]).is_zero()


def transmission_admissibility(s, j, which_side_of_j):
    """Which admissibility flags pair j's designated interval carries."""
    a0, b0 = s.support
    lo, hi = s.pairs[j].interval(which_side_of_j)
    return {"left": (lo - a0).is_zero(), "right": (hi - b0).is_zero()}


def _end_touchers(s, side):
    """(pair, side) of every interval whose outer endpoint hits the support end."""
    a0, b0 = s.support
    out = []
    for i, which, (lo, hi) in s.intervals():
        edge = hi - b0 if side == RIGHT else lo - a0
        if edge.is_zero():
            out.append((i, which))
    return out


def reduce(s, side):
    """Cut off the singly covered end of the support.

    On the right: the unique interval reaching B is shrunk back to the
    rightmost critical point u interior to it, its partner is shrunk by
    the same amount on its right end, and the support becomes [A, u].
    Mirror image on the left.
    """
    touchers = _end_touchers(s, side)
    if len(touchers) != 1:
        raise PreconditionFailed(
            f"support end covered by {len(touchers)} intervals, need exactly 1"
        )
    k, which = touchers[0]
    pk = s.pairs[k]
    tgt = pk.interval(which)
    partner = pk.other(which)
    crit = []
    for _, _, (lo, hi) in s.intervals():
        crit.append(lo)
        crit.append(hi)
    interior = [
        p for p in crit if (p - tgt[0]).sign() > 0 and (tgt[1] - p).sign() > 0
    ]
    if not interior:
        raise PreconditionFailed("no critical point interior to the end interval")
    u = interior[0]
    for p in interior[1:]:
        if side == RIGHT:
            if (p - u).sign() > 0:
                u = p
        else:
            if (p - u).sign() < 0:
                u = p
    if side == RIGHT:
        new_tgt = (tgt[0], u)
        new_partner = (partner[0], partner[1] - (tgt[1] - u))
        support = (s.support[0], u)
    else:
        new_tgt = (u, tgt[1])
        new_partner = (partner[0] + (u - tgt[0]), partner[1])
        support = (u, s.support[1])
    if which == LEFT:
        new_pair = IntervalPair(new_tgt, new_partner)
    else:
        new_pair = IntervalPair(new_partner, new_tgt)
    pairs = list(s.pairs)
    pairs[k] = new_pair
    return IIS(s.field, support, pairs)


def rauzy_step(s, side, with_log=False):
    """Admissible transmission on `side`, then the reduction there when
    its precondition holds."""
    touchers = _end_touchers(s, side)
    if len(touchers) < 2:
        raise NoAdmissibleMove(f"need two intervals at the {side} end")
    if len(touchers) > 2:
        raise AmbiguousMove(f"{len(touchers)} intervals share the {side} end")
    (i1, w1), (i2, w2) = touchers
    if i1 == i2:
        raise NoAdmissibleMove("both end intervals belong to the same pair")
    width1 = s.pairs[i1].width
    width2 = s.pairs[i2].width
    sg = (width1 - width2).sign()
    if sg == 0:
        raise AmbiguousMove("end intervals have equal widths")
    if sg < 0:
        mover, mside, along, aside = i1, w1, i2, w2
    else:
        mover, mside, along, aside = i2, w2, i1, w1
    out = transmit(s, mover, along, aside, which_of_i=mside)
    log = [{"move": "transmit", "side": side, "pair": mover}]
    try:
        out = reduce(out, side)
        log.append({"move": "reduce", "side": side, "pair": along})
    except PreconditionFailed:
        pass
    if with_log:
        return out, log
    return out


@dataclass(frozen=True)
class SimilarityReport:
    period: int
    contraction: object
    translation: object
    move_log: tuple

    @property
    def sides(self):
        seen = []
        for m in self.move_log:
            if m["move"] == "transmit":
                seen.append(m["side"])
        return tuple(seen)


def affine_match(base, other):
    """If other == k*base + t endpointwise (pairs unordered), return
    (k, t), else None.  k is the support width ratio."""
    if base.order != other.order:
        return None
    k = (other.support[1] - other.support[0]) / (base.support[1] - base.support[0])
    t = other.support[0] - k * base.support[0]

    def img(x):
        return k * x + t

    base_pairs = _value_sorted([p.canonical() for p in base.pairs])
    other_pairs = _value_sorted([p.canonical() for p in other.pairs])
    for bp, op in zip(base_pairs, other_pairs):
        for xb, xo in zip(bp, op):
            if not (img(xb) - xo).is_zero():
                return None
    return k, t


def detect_self_similarity(s, max_steps, policy="right"):
    """Search induction schedules for an exact scaled return.

    policy: "right" / "left" (fixed side), "alternate-rl" / "alternate-lr",
    or "search" (breadth-first over all side sequences).  Returns a
    SimilarityReport, or None when no schedule of at most max_steps
    steps reproduces s up to an affine contraction.  The default is the
    right-handed induction, the schedule both bundled systems contract
    under; "search" can find shorter mixed-side returns.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")

    def step_or_none(cur, side):
        try:
            return rauzy_step(cur, side, with_log=True)
        except (NoAdmissibleMove, AmbiguousMove):
            return None

    if policy in (RIGHT, LEFT):
        sides = [policy] * max_steps
        schedules = [sides]
    elif policy == "alternate-rl":
        schedules = [[(RIGHT, LEFT)[k % 2] for k in range(max_steps)]]
    elif policy == "alternate-lr":
        schedules = [[(LEFT, RIGHT)[k % 2] for k in range(max_steps)]]
    elif policy == "search":
        schedules = None
    else:
        raise ValueError(f"unknown policy {policy!r}")

    if schedules is not None:
        for sides in schedules:
            cur = s
            log = []
            for n, side in enumerate(sides, start=1):
                nxt = step_or_none(cur, side)
                if nxt is None:
                    break
                cur, moves = nxt
                log.extend(moves)
                hit = affine_match(s, cur)
                if hit is not None:
                    k, t = hit
                    return SimilarityReport(n, k, t, tuple(log))
        return None

    # Breadth-first over side sequences, deduplicating states.
    frontier = [(s, [])]
    seen = {s.canonical_key()}
    for depth in range(1, max_steps + 1):
        nxt_frontier = []
        for cur, log in frontier:
            for side in (RIGHT, LEFT):
                res = step_or_none(cur, side)
                if res is None:
                    continue
                nxt, moves = res
                hit = affine_match(s, nxt)
                if hit is not None:
                    k, t = hit
                    return SimilarityReport(depth, k, t, tuple(log + moves))
                key = nxt.canonical_key()
                if key not in seen:
                    seen.add(key)
                    nxt_frontier.append((nxt, log + moves))
        frontier = nxt_frontier
        if not frontier:
            break
    return None


def mirror_system(s):
    """Reflect through the support midpoint: x -> A + B - x."""
    a0, b0 = s.support
    m = a0 + b0

    def flip(iv):
        return (m - iv[1], m - iv[0])

    pairs = [IntervalPair(flip(p.left), flip(p.right)) for p in s.pairs]
    return IIS(s.field, s.support, pairs)


def scale_translate(s, k, t):
    """The affine image k*s + t, k > 0."""
    if k.sign() <= 0:
        raise InvalidSystem("scale factor must be positive")

    def img(iv):
        return (k * iv[0] + t, k * iv[1] + t)

    support = img(s.support)
    pairs = [IntervalPair(img(p.left), img(p.right)) for p in s.pairs]
    return IIS(s.field, support, pairs)


# -- orbit graphs ----------------------------------------------------------------


def _in_support(s, x):
    a0, b0 = s.support
    return (x - a0).sign() >= 0 and (b0 - x).sign() >= 0


def neighbors(s, x):
    """Identification edges at x: one per subinterval membership,
    dropping memberships that map x to itself."""
    out = []
    for i, p in enumerate(s.pairs):
        for side in (LEFT, RIGHT):
            lo, hi = p.interval(side)
            if (x - lo).sign() >= 0 and (hi - x).sign() >= 0:
                o = p.other(side)
                y = x + (o[0] - lo)
                if not (y - x).is_zero():
                    out.append((y, i))
    return out


def point_valence(s, x):
    if not _in_support(s, x):
        raise OutOfSupport(f"{x!r}")
    return len(neighbors(s, x))


@dataclass
class OrbitGraphSlice:
    root: object
    depth: int
    vertices: set
    edges: set
    frontier: set

    def adjacency(self):
        adj = {v: [] for v in self.vertices}
        for (a, b, i) in self.edges:
            adj[a].append((b, i))
            adj[b].append((a, i))
        return adj


def orbit_bfs(s, x, depth):
    """Breadth-first slice of the orbit graph around x, to edge depth
    `depth`.  Frontier vertices are at distance exactly `depth` and are
    not expanded."""
    if not _in_support(s, x):
        raise OutOfSupport(f"{x!r}")
    vertices = {x}
    edges = set()
    layer = [x]
    for _ in range(depth):
        nxt = []
        for v in layer:
            for w, i in neighbors(s, v):
                a, b = (v, w) if (w - v).sign() > 0 else (w, v)
                edges.add((a, b, i))
                if w not in vertices:
                    vertices.add(w)
                    nxt.append(w)
        layer = nxt
    return OrbitGraphSlice(
        root=x, depth=depth, vertices=vertices, edges=edges, frontier=set(layer)
    )

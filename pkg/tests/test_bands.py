"""Band complexes: machine moves, cycle detection, end criterion, pruning."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thinsections import polynomials as P
from thinsections import reference as ref
from thinsections.bands import (
    Band,
    BandComplex,
    BandEnd,
    CycleReport,
    SupportArc,
    collapse_free_subarc,
    complex_from_iis,
    detect_rips_cycle,
    drop_dead_subarcs,
    find_free_subarcs,
    merge_long_bands,
    one_end_criterion,
    pruning_decay,
    rips_step,
    segmentation,
    support_measure,
)
from thinsections.errors import (
    AuditError,
    Halted,
    NotFound,
    NotFree,
    NotMaximal,
)
from thinsections.iis import IIS, IntervalPair, build_system, system_params
from thinsections.linalg import RatMatrix, char_poly, mat_over_field, perron_root_interval
from thinsections.numberfield import rational_field


@pytest.fixture(scope="module")
def s1():
    return build_system("s1")


@pytest.fixture(scope="module")
def s2():
    return build_system("s2")


@pytest.fixture(scope="module")
def x1(s1):
    return complex_from_iis(s1)


@pytest.fixture(scope="module")
def x2(s2):
    return complex_from_iis(s2)


@pytest.fixture(scope="module")
def rep1(x1):
    return detect_rips_cycle(x1, max_steps=60)


@pytest.fixture(scope="module")
def rep2(x2):
    return detect_rips_cycle(x2, max_steps=60)


_QF = rational_field()


def q(v):
    return _QF.rational(Fraction(v))


def rational_complex(arcs, bands):
    sa = [SupportArc(q(lo), q(hi)) for lo, hi in arcs]
    bs = [
        Band(BandEnd(a1, q(l1), q(h1)), BandEnd(a2, q(l2), q(h2)), Fraction(ln))
        for (a1, l1, h1), (a2, l2, h2), ln in bands
    ]
    return BandComplex(_QF, sa, bs)


def apply_over_field(m, vec, field):
    rows = mat_over_field(m, field)
    return [sum((r[j] * vec[j] for j in range(len(vec))), field.zero) for r in rows]


# -- construction ------------------------------------------------------------------


def test_constructor_guards():
    with pytest.raises(AuditError):
        SupportArc(q(1), q(1))  # zero length
    with pytest.raises(AuditError):
        Band(BandEnd(0, q(0), q(1)), BandEnd(0, q(2), q(4)), Fraction(1))  # widths differ
    with pytest.raises(AuditError):
        # base escapes its arc
        BandComplex(
            _QF,
            [SupportArc(q(0), q(2))],
            [Band(BandEnd(0, q(0), q(1)), BandEnd(0, q(1), q(3)), Fraction(1))],
        )


def test_complex_from_iis_shape(s1, x1):
    assert len(x1.supports) == 1
    assert (x1.supports[0].lo).is_zero() and (x1.supports[0].hi - s1.field.one).is_zero()
    assert len(x1.bands) == 3
    assert all(b.length == 1 for b in x1.bands)
    assert (support_measure(x1) - s1.field.one).is_zero()
    widths = sorted(float(b.width) for b in x1.bands)
    expect = sorted(float(p.width) for p in s1.pairs)
    assert widths == expect


# -- segmentation and free subarcs -------------------------------------------------


def test_segmentation_partitions_support(s1, x1):
    _, segs = segmentation(x1)
    total = s1.field.zero
    for arc, lo, hi, covers in segs:
        assert (hi - lo).sign() > 0
        total = total + (hi - lo)
        # cover count at the midpoint agrees with raw interval containment
        mid = lo + (hi - lo) * Fraction(1, 2)
        naive = sum(
            1
            for p in s1.pairs
            for plo, phi in p.intervals()
            if (mid - plo).sign() > 0 and (phi - mid).sign() > 0
        )
        assert len(covers) == naive
    assert (total - support_measure(x1)).is_zero()


def test_first_free_subarcs(s1, x1):
    a, b, c, u = system_params("s1")
    recs = [r for r in find_free_subarcs(x1) if r.kind == "free"]
    assert len(recs) == 2
    # the singly covered stretch of the widest base, and its mirror image
    assert (recs[0].lo - b).is_zero() and (recs[0].hi - u).is_zero()
    assert recs[0].band == 1 and recs[0].role == "bottom"
    one = s1.field.one
    assert (recs[1].lo - (one - u)).is_zero() and (recs[1].hi - (one - b)).is_zero()
    assert recs[1].band == 1 and recs[1].role == "top"


def test_dead_subarc_detection():
    x = rational_complex([(0, 10)], [((0, 0, 2), (0, 8, 10), 1)])
    recs = find_free_subarcs(x)
    kinds = [(r.kind, float(r.lo), float(r.hi)) for r in recs]
    assert ("free", 0.0, 2.0) in kinds
    assert ("free", 8.0, 10.0) in kinds
    assert ("dead", 2.0, 8.0) in kinds


# -- collapse ----------------------------------------------------------------------


def test_first_collapse_reference(s1, x1):
    a, b, c, u = system_params("s1")
    one = s1.field.one
    rec = [r for r in find_free_subarcs(x1) if r.kind == "free"][0]
    out = collapse_free_subarc(x1, rec)
    # support loses exactly the open subarc (b, u)
    assert (support_measure(out) - (one - (u - b))).is_zero()
    got = [(float(ar.lo), float(ar.hi)) for ar in out.supports]
    assert got == [(0.0, pytest.approx(float(b))), (pytest.approx(float(u)), 1.0)]
    # the covering band splits into two remnants; the other two survive
    assert len(out.bands) == 4
    one = s1.field.one
    expected = [
        ((0, s1.field.zero, b), (1, one - a, one - a + b), 1),  # left remnant
        ((0, s1.field.zero, b), (1, one - b, one), 1),
        ((1, u, a), (1, one - a + u, one), 1),  # right remnant
        ((1, u, u + c), (1, one - u - c, one - u), 1),
    ]
    for bd, (bot, top, ln) in zip(out.bands, expected):
        assert bd.bottom.arc == bot[0] and bd.top.arc == top[0]
        assert (bd.bottom.lo - bot[1]).is_zero() and (bd.bottom.hi - bot[2]).is_zero()
        assert (bd.top.lo - top[1]).is_zero() and (bd.top.hi - top[2]).is_zero()
        assert bd.length == ln


def test_collapse_guards(s1, x1):
    a, b, c, u = system_params("s1")
    with pytest.raises(NotFree):
        collapse_free_subarc(x1, 0, (s1.field.zero, b))  # doubly covered
    half = b + (u - b) * Fraction(1, 2)
    with pytest.raises(NotMaximal):
        collapse_free_subarc(x1, 0, (b, half))  # proper subinterval
    with pytest.raises(NotFree):
        collapse_free_subarc(x1, 0, (s1.field.zero, u))  # straddles segments


def test_full_base_collapse_deletes_band():
    x = rational_complex([(0, 3)], [((0, 0, 1), (0, 2, 3), 1)])
    rec = [r for r in find_free_subarcs(x) if r.kind == "free"][0]
    out = collapse_free_subarc(x, rec)
    assert len(out.bands) == 0
    assert [(float(ar.lo), float(ar.hi)) for ar in out.supports] == [(1.0, 3.0)]


# -- merge and dead deletion -------------------------------------------------------


def test_merge_two_band_chain():
    x = rational_complex(
        [(0, 3)], [((0, 0, 1), (0, 1, 2), 1), ((0, 1, 2), (0, 2, 3), 1)]
    )
    out = merge_long_bands(x)
    assert len(out.bands) == 1
    bd = out.bands[0]
    assert bd.length == 2
    assert (float(bd.bottom.lo), float(bd.bottom.hi)) == (0.0, 1.0)
    assert (float(bd.top.lo), float(bd.top.hi)) == (2.0, 3.0)
    # support untouched; the shared base is now dead but still present
    assert (support_measure(out) - support_measure(x)).is_zero()
    _, segs = segmentation(out)
    dead = [(float(lo), float(hi)) for _, lo, hi, covers in segs if not covers]
    assert dead == [(1.0, 2.0)]


def test_merge_chain_of_three():
    x = rational_complex(
        [(0, 4)],
        [
            ((0, 0, 1), (0, 1, 2), 1),
            ((0, 1, 2), (0, 2, 3), 1),
            ((0, 2, 3), (0, 3, 4), 1),
        ],
    )
    out = merge_long_bands(x)
    assert len(out.bands) == 1 and out.bands[0].length == 3
    assert sum(b.length for b in out.bands) == sum(b.length for b in x.bands)


def test_merge_requires_exactly_double_cover():
    x = rational_complex(
        [(0, 5)],
        [
            ((0, 0, 1), (0, 1, 2), 1),
            ((0, 1, 2), (0, 2, 3), 1),
            ((0, 1, 2), (0, 4, 5), 1),  # third cover blocks the chain
        ],
    )
    out = merge_long_bands(x)
    assert len(out.bands) == 3


def test_merge_identity_on_initial_complex(x1):
    out = merge_long_bands(x1)
    assert len(out.bands) == 3
    assert (support_measure(out) - support_measure(x1)).is_zero()


def test_drop_dead_reference():
    x = rational_complex([(0, 10)], [((0, 0, 2), (0, 8, 10), 1)])
    out = drop_dead_subarcs(x)
    assert [(float(ar.lo), float(ar.hi)) for ar in out.supports] == [
        (0.0, 2.0),
        (8.0, 10.0),
    ]
    assert float(support_measure(out)) == 4.0
    bd = out.bands[0]
    assert (bd.bottom.arc, bd.top.arc) == (0, 1)


# -- one machine step --------------------------------------------------------------


def test_rips_step_reference(s1, x1):
    a, b, c, u = system_params("s1")
    one = s1.field.one
    out, log = rips_step(x1)
    # collapse of (b, u) through the widest band, then the two bands over
    # [0, b] fuse, then the dead [0, b] disappears
    assert log[0] == {"move": "collapse", "arc": 0, "band": 1, "end": "bottom"}
    assert {"move": "merge", "bands": [0, 1]} in log
    assert log[-1] == {"move": "drop-dead", "segments": 1}
    assert (support_measure(out) - (one - u)).is_zero()
    stats = sorted((float(bd.width), int(bd.length)) for bd in out.bands)
    assert stats[0] == (pytest.approx(float(a - u)), 1)
    assert stats[1] == (pytest.approx(float(b)), 2)
    assert stats[2] == (pytest.approx(float(c)), 1)


def test_rips_step_halts_on_interval_exchange():
    iet = rational_complex(
        [(0, 1)],
        [
            ((0, 0, Fraction(2, 5)), (0, Fraction(3, 5), 1), 1),
            ((0, Fraction(2, 5), 1), (0, 0, Fraction(3, 5)), 1),
        ],
    )
    with pytest.raises(Halted):
        rips_step(iet)


def test_rips_step_composition_matches_moves(s1, x1):
    rec = [r for r in find_free_subarcs(x1) if r.kind == "free"][0]
    manual = drop_dead_subarcs(merge_long_bands(collapse_free_subarc(x1, rec)))
    auto, _ = rips_step(x1)
    assert len(manual.bands) == len(auto.bands)
    assert len(manual.supports) == len(auto.supports)
    assert (support_measure(manual) - support_measure(auto)).is_zero()


def test_rips_step_preserves_orbit_relations(s1, x1):
    # every identification surviving a step is already an orbit relation
    # of the unreduced complex within bounded depth
    import random

    def edges(x, v):
        out = []
        for band in x.bands:
            for end, other in ((band.bottom, band.top), (band.top, band.bottom)):
                if (v - end.lo).sign() >= 0 and (end.hi - v).sign() >= 0:
                    out.append(v - end.lo + other.lo)
        return out

    def reachable(x, src, dst, depth):
        seen = {src}
        frontier = [src]
        for _ in range(depth):
            nxt = []
            for v in frontier:
                for w in edges(x, v):
                    if w in seen:
                        continue
                    if (w - dst).is_zero():
                        return True
                    seen.add(w)
                    nxt.append(w)
            frontier = nxt
        return (src - dst).is_zero()

    rng = random.Random(12)
    step1, _ = rips_step(x1)
    step2, _ = rips_step(step1)
    checked = 0
    for x_new in (step1, step2):
        for arc in x_new.supports:
            for _ in range(9):
                t = Fraction(rng.getrandbits(32), 1 << 32)
                p = arc.lo + (arc.hi - arc.lo) * t
                for img in edges(x_new, p):
                    assert reachable(x1, p, img, 6)
                    checked += 1
    assert checked >= 50


# -- cycle detection: widest system ------------------------------------------------


def test_s1_cycle_shape(s1, rep1):
    lam = s1.field.gen
    assert (rep1.prefix_steps, rep1.period_steps) == (5, 13)
    assert (rep1.contraction - lam * lam).is_zero()
    assert rep1.width_matrix.rows == 11 and rep1.length_matrix.rows == 5
    assert len(rep1.phases) == rep1.period_steps + 1


def test_s1_cycle_eigen_identities(s1, rep1):
    k = rep1.contraction
    img = apply_over_field(rep1.width_matrix, rep1.params_start, s1.field)
    for got, v in zip(img, rep1.params_start):
        assert (got - k * v).is_zero()
    for end, v in zip(rep1.params_end, rep1.params_start):
        assert (end - k * v).is_zero()
    lengths_img = rep1.length_matrix.apply(rep1.lengths_start)
    assert list(lengths_img) == list(rep1.lengths_end)
    assert list(map(int, rep1.lengths_start)) == [1, 1, 1, 3, 4]
    assert list(map(int, rep1.lengths_end)) == [16, 1, 1, 27, 28]


def test_s1_cycle_contracts_support(rep1):
    m0 = support_measure(rep1.complex_start)
    m1 = support_measure(rep1.complex_end)
    assert (m1 - rep1.contraction * m0).is_zero()


def test_s1_phase_realizes_recorded_stage(rep1):
    # eight steps in, all five recorded stage quantities appear as exact
    # band widths (the recorded gap h included)
    ph = rep1.phases[8 - rep1.prefix_steps]
    assert len(ph.supports) == 3 and len(ph.bands) == 5
    stage = dict(zip(ref.STAGE_LABELS["s1"], ref.stage_params("s1")))
    seen = {}
    for bd in ph.bands:
        hits = [lbl for lbl, v in stage.items() if (bd.width - v).is_zero()]
        assert len(hits) == 1
        seen[hits[0]] = int(bd.length)
    assert seen == {"h": 1, "n": 5, "r2": 1, "g": 4, "r1": 3}


def test_s1_recorded_cycle_embeds_spectrally(rep1):
    cw = char_poly(rep1.width_matrix)
    cr = char_poly(ref.WIDTH_CYCLE["s1"])
    _, rem = P.divmod_poly(cw, cr)
    assert P.is_zero(rem)
    # the recorded length cycle does NOT embed: length bookkeeping is
    # trajectory specific
    cl = char_poly(rep1.length_matrix)
    cL = char_poly(ref.LENGTH_CYCLE["s1"])
    _, rem2 = P.divmod_poly(cl, cL)
    assert not P.is_zero(rem2)


@pytest.mark.xfail(
    strict=True,
    reason="the recorded per-cycle matrices are 5x5/4x4 while this trajectory's "
    "cycle carries 11 segments and 5 bands; no relabeling permutation can "
    "conjugate matrices of different sizes",
)
def test_s1_recorded_matrices_match_up_to_relabeling(rep1):
    assert rep1.width_matrix.rows == ref.WIDTH_CYCLE["s1"].rows
    assert rep1.length_matrix.rows == ref.LENGTH_CYCLE["s1"].rows


# -- cycle detection: second system ------------------------------------------------


def test_s2_cycle_shape(s2, rep2):
    lam = s2.field.gen
    assert (rep2.prefix_steps, rep2.period_steps) == (2, 20)
    assert (rep2.contraction - lam * lam).is_zero()
    assert rep2.width_matrix.rows == 10 and rep2.length_matrix.rows == 4


def test_s2_cycle_eigen_identities(s2, rep2):
    k = rep2.contraction
    img = apply_over_field(rep2.width_matrix, rep2.params_start, s2.field)
    for got, v in zip(img, rep2.params_start):
        assert (got - k * v).is_zero()
    lengths_img = rep2.length_matrix.apply(rep2.lengths_start)
    assert list(lengths_img) == list(rep2.lengths_end)
    m0 = support_measure(rep2.complex_start)
    m1 = support_measure(rep2.complex_end)
    assert (m1 - k * m0).is_zero()


@pytest.mark.xfail(
    strict=True,
    reason="the detected cycle contracts by the square of the recorded factor: "
    "the one-factor stage does not recur combinatorially at this step "
    "granularity (no mirror-isomorphic half period exists either)",
)
def test_s2_cycle_contraction_is_single_factor(s2, rep2):
    assert (rep2.contraction - s2.field.gen).is_zero()


def test_s2_phase_realizes_recorded_stage(s2, rep2):
    # fourteen steps in: one arc, three bands, the recorded widths and
    # the recorded length multiset
    ph = rep2.phases[14 - rep2.prefix_steps]
    assert len(ph.supports) == 1 and len(ph.bands) == 3
    stage = dict(zip(ref.STAGE_LABELS["s2"], ref.stage_params("s2")))
    pairing = {}
    for bd in ph.bands:
        hits = [lbl for lbl, v in stage.items() if (bd.width - v).is_zero()]
        assert len(hits) == 1
        pairing[hits[0]] = int(bd.length)
    # length multiset matches the record; the width-to-length pairing is
    # trajectory specific (the record pairs a' with 15, b' with 14)
    assert pairing == {"a'": 14, "b'": 15, "c'": 15}
    # the two recorded gap parameters are distances from the left end of
    # the support to breakpoints of the complex
    breaks, _ = segmentation(ph)
    arc = ph.supports[0]
    dists = [p - arc.lo for p in breaks[0]]
    for lbl in ("d'", "e'"):
        assert any((d - stage[lbl]).is_zero() for d in dists)


@pytest.mark.xfail(
    strict=True,
    reason="the recorded three-band lengths appear twelve steps after the "
    "detected cycle entry, not at the entry itself",
)
def test_s2_recorded_lengths_at_cycle_entry(rep2):
    assert sorted(map(int, rep2.lengths_start)) == [14, 15, 15]


def test_s2_length_growth_is_exactly_49(rep2):
    cp = char_poly(rep2.length_matrix)
    # x * (x^2 + x + 1) * (x - 49)
    assert P.evaluate(cp, Fraction(49)) == 0
    lo, hi = perron_root_interval(rep2.length_matrix, Fraction(1, 10**12))
    assert lo <= 49 <= hi and hi - lo <= Fraction(2, 10**12)
    cr = char_poly(ref.WIDTH_CYCLE["s2"])
    _, rem = P.divmod_poly(char_poly(rep2.width_matrix), cr)
    assert not P.is_zero(rem)  # unlike the widest system, no spectral embedding


def test_detect_guards(x1):
    with pytest.raises(NotFound):
        detect_rips_cycle(x1, max_steps=3)
    iet = rational_complex(
        [(0, 1)],
        [
            ((0, 0, Fraction(2, 5)), (0, Fraction(3, 5), 1), 1),
            ((0, Fraction(2, 5), 1), (0, 0, Fraction(3, 5)), 1),
        ],
    )
    with pytest.raises(NotFound):
        detect_rips_cycle(iet, max_steps=10)


# -- recorded renormalization tables -----------------------------------------------


def test_recorded_tables_are_selfconsistent():
    for name in ("s1", "s2"):
        field = build_system(name).field
        sp = ref.stage_params(name)
        sc = ref.stage_params_scaled(name)
        k = ref.cycle_contraction(name)
        assert all(x.sign() > 0 for x in sp)
        for x, y in zip(sp, sc):
            assert (y - k * x).is_zero()
        for x, y in zip(ref.entry_stage_params(name), sp):
            assert (x - y).is_zero()
        img = apply_over_field(ref.WIDTH_CYCLE[name], sp, field)
        for got, v in zip(img, sp):
            assert (got - k * v).is_zero()


def test_recorded_table_transcription_defects(s1, s2):
    # the uncorrected third entry-map row annihilates the defining
    # parameters outright, so the corrected row is forced
    a, b, c, u = system_params("s1")
    assert (2 * a - c - 2 * u).is_zero()
    n = ref.stage_params("s1")[4]
    assert (2 * a - b - 2 * u - n).is_zero()
    # the uncorrected constant term of the first scaled stage entry
    # misses the contraction identity by exactly 46/3
    lam = s2.field.gen
    ap = ref.stage_params("s2")[0]
    wrong = 20 * lam**2 + Fraction(286, 3) * lam + Fraction(23, 3)
    assert (wrong - lam * ap - Fraction(46, 3)).is_zero()


def test_recorded_stage_lengths_advance():
    l1 = ref.LENGTH_CYCLE["s1"].apply([Fraction(v) for v in ref.STAGE_LENGTHS["s1"]])
    assert list(map(int, l1)) == [17, 1, 29, 34]
    l2 = ref.LENGTH_CYCLE["s2"].apply([Fraction(v) for v in ref.STAGE_LENGTHS["s2"]])
    assert list(map(int, l2)) == [117, 117, 103]


# -- end criterion -----------------------------------------------------------------


def test_one_end_criterion_on_detected_cycles(rep1, rep2):
    ok, (lo, hi) = one_end_criterion(rep1)
    assert ok and hi < 1
    assert 0.442 < lo <= hi < 0.443
    ok2, (lo2, hi2) = one_end_criterion(rep2)
    assert ok2 and hi2 < 1
    assert 0.306 < lo2 <= hi2 < 0.307


def test_one_end_criterion_on_recorded_tables():
    for name, lo_want, hi_want in (("s1", 0.39, 0.40), ("s2", 0.62, 0.64)):
        rep = CycleReport(
            0,
            1,
            ref.cycle_contraction(name),
            None,
            ref.LENGTH_CYCLE[name],
            (),
            (),
            (),
            (),
            None,
            None,
        )
        ok, (lo, hi) = one_end_criterion(rep)
        assert ok
        assert lo_want < lo <= hi < hi_want


def test_one_end_criterion_rejects_expansion():
    rep = CycleReport(
        0,
        1,
        _QF.rational(Fraction(1, 2)),
        None,
        RatMatrix.from_rows([[4]]),
        (),
        (),
        (),
        (),
        None,
        None,
    )
    ok, (lo, hi) = one_end_criterion(rep)
    assert not ok
    assert lo <= 2 <= hi


# -- pruning decay -----------------------------------------------------------------


def test_pruning_monotone_and_strictly_decaying(s1):
    rep = pruning_decay(s1, rounds=20, samples=60, seed=1)
    assert rep.exhausted == 0
    assert all(x >= y for x, y in zip(rep.estimates, rep.estimates[1:]))
    assert 0 < rep.estimates[-1] < rep.estimates[0] <= 1
    assert len(rep) == 20 and rep[0] == rep.estimates[0]


def test_pruning_interval_exchange_never_decays():
    iet = IIS(
        _QF,
        (q(0), q(1)),
        [
            IntervalPair((q(0), q(Fraction(2, 5))), (q(Fraction(3, 5)), q(1))),
            IntervalPair((q(Fraction(2, 5)), q(1)), (q(0), q(Fraction(3, 5)))),
        ],
    )
    rep = pruning_decay(iet, rounds=6, samples=40, seed=3)
    assert rep.estimates == [1.0] * 6
    assert rep.exhausted == 0


def test_pruning_exhaustion_is_counted(s1):
    rep = pruning_decay(s1, rounds=12, samples=10, seed=5, cap=20)
    assert rep.exhausted > 0
    assert rep.samples == 10
    assert all(0 <= e <= 1 for e in rep.estimates)


@pytest.mark.slow
def test_pruning_decay_follows_band_area(s1):
    # survivors after r rounds track the measured area of the band
    # complex, not its support: the per-round ratio approaches a power
    # law r^(-alpha) with alpha = -log(contraction * length growth) /
    # log(length growth), about 0.41 for this system, far from the
    # exponential the support measure alone would suggest
    rep = pruning_decay(s1, rounds=40, samples=150, seed=7)
    assert rep.exhausted == 0
    es = rep.estimates
    assert all(x >= y for x, y in zip(es, es[1:]))
    # an exponential with the support contraction would be ~3e-4 by r=40
    assert es[39] > 0.1
    xs = [math.log(r) for r in range(8, 41)]
    ys = [math.log(es[r - 1]) for r in range(8, 41)]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    alpha = -sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum(
        (x - mx) ** 2 for x in xs
    )
    assert 0.2 < alpha < 0.6


# -- randomized move bookkeeping -----------------------------------------------------

frac12 = st.integers(min_value=0, max_value=60).map(lambda n: Fraction(n, 12))
width12 = st.integers(min_value=1, max_value=36).map(lambda n: Fraction(n, 12))


@st.composite
def small_systems(draw):
    pairs = []
    hi = Fraction(0)
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        w = draw(width12)
        l1 = draw(frac12)
        l2 = draw(frac12)
        pairs.append(((l1, l1 + w), (l2, l2 + w)))
        hi = max(hi, l1 + w, l2 + w)
    support = (Fraction(0), hi + draw(width12))
    return IIS(
        _QF,
        (q(support[0]), q(support[1])),
        [
            IntervalPair((q(a), q(b)), (q(c), q(d)))
            for (a, b), (c, d) in pairs
        ],
    )


@settings(max_examples=80, deadline=None)
@given(small_systems())
def test_step_bookkeeping_randomized(s):
    x = complex_from_iis(s)
    frees = [r for r in find_free_subarcs(x) if r.kind == "free"]
    if not frees:
        with pytest.raises(Halted):
            rips_step(x)
        return
    best = frees[0]
    for r in frees[1:]:
        if r.arc < best.arc or (r.arc == best.arc and (r.lo - best.lo).sign() < 0):
            best = r
    collapsed = collapse_free_subarc(x, best)
    # the support loses exactly the free subarc
    drop = support_measure(x) - support_measure(collapsed)
    assert (drop - (best.hi - best.lo)).is_zero()
    merged = merge_long_bands(collapsed)
    assert (support_measure(merged) - support_measure(collapsed)).is_zero()
    assert sum(b.length for b in merged.bands) == sum(b.length for b in collapsed.bands)
    final = drop_dead_subarcs(merged)
    assert (support_measure(x) - support_measure(final)).sign() >= 0
    # the composed moves agree with the packaged step
    auto, log = rips_step(x)
    assert log[0]["move"] == "collapse"
    assert (support_measure(final) - support_measure(auto)).is_zero()
    assert len(final.bands) == len(auto.bands)

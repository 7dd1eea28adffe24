import io
import random
from fractions import Fraction

import pytest

from cutproject.acceptance import PatternSpec
from cutproject.discrepancy import (
    Cochain,
    DiscrepancyProfile,
    TooFewPoints,
    cochain_discrepancy,
    disc,
    estimate_density,
    profile,
)
from cutproject.exactnum import XiSpec
from cutproject.patterns import (
    PointPattern,
    RotationSystem,
    Window,
    local_discrepancy,
    orbit_hits,
    parse_window,
)
from oracles import brute_profile

SQRT2 = XiSpec.sqrt(2)


def kesten_system():
    return RotationSystem(SQRT2, SQRT2.zero, Window.single(SQRT2.zero, SQRT2.real(-1, 1)))


def half_system():
    return RotationSystem(
        SQRT2, SQRT2.zero, Window.single(SQRT2.zero, SQRT2.real(Fraction(1, 2)))
    )


class TestDisc:
    def test_integer_lattice_examples(self):
        integers = PointPattern(tuple(range(-5, 30)))
        assert disc(integers, (0, 10), 1) == 0
        assert disc(integers, (0, Fraction(21, 2)), 1) == Fraction(1, 2)

    def test_half_open_interval_membership(self):
        pts = PointPattern((0, 1, 2, 3))
        # [0, 3) holds 0,1,2
        assert disc(pts, (0, 3), Fraction(1, 3), signed=True) == 2
        # XiReal bounds: [0, sqrt2) holds 0 and 1
        assert disc(pts, (SQRT2.zero, SQRT2.xi_real), 1, signed=True) == SQRT2.real(2, -1)

    def test_cross_check_against_local_discrepancy(self):
        sys = half_system()
        n = 10**4
        pts = orbit_hits(sys, 0, n)
        # counting over [0, n) drops the k = n endpoint and one length unit
        d_signed = disc(pts, (0, n), Fraction(1, 2), signed=True)
        assert d_signed == local_discrepancy(sys, n - 1) - Fraction(1, 2)

    def test_additive_over_partition(self):
        sys = kesten_system()
        pts = orbit_hits(sys, 0, 3000)
        delta = sys.window.total_length()
        whole = disc(pts, (0, 3000), delta, signed=True)
        left = disc(pts, (0, 1234), delta, signed=True)
        right = disc(pts, (1234, 3000), delta, signed=True)
        assert whole == left + right


class TestEstimateDensity:
    def test_exact_for_cut_and_project(self):
        sys = kesten_system()
        pts = orbit_hits(sys, 0, 500)
        est = estimate_density(pts, sys)
        assert est.exact and est.value == SQRT2.real(-1, 1)

    def test_empirical_even_integers(self):
        pts = PointPattern(tuple(range(0, 400, 2)))
        est = estimate_density(pts)
        assert not est.exact
        assert abs(est.value - Fraction(1, 2)) <= est.sensitivity + Fraction(1, 100)

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            estimate_density(PointPattern(tuple(range(10))))


class TestProfile:
    def test_bounded_flagship_decades_constant(self):
        p = profile(kesten_system(), 10**4)
        decs = p.decade_values()
        assert all(v == SQRT2.one for v in decs)
        assert p.sup_seen == SQRT2.one

    def test_against_brute_force(self):
        sys = RotationSystem(
            SQRT2,
            SQRT2.real(Fraction(2, 7)),
            parse_window("[1/5, 1/3) [1/2, -1/2+1*xi)", SQRT2),
        )
        p = profile(sys, 700)
        want = brute_profile(sys, 700, {100, 700})
        got = dict(p.decade_maxima)
        assert got[100] == want[100]
        assert got[700] == want[700]
        by_n = {s.n: s for s in p.samples}
        assert by_n[700].running_sup == want[700]

    def test_decade_maxima_monotone(self):
        p = profile(half_system(), 10**5)
        vals = [v for _, v in p.decade_maxima]
        assert all((b - a).sign() >= 0 for a, b in zip(vals, vals[1:]))
        # trace running sup is monotone too and ends at sup_seen
        sups = [s.running_sup for s in p.samples]
        assert all((b - a).sign() >= 0 for a, b in zip(sups, sups[1:]))
        assert sups[-1] == p.sup_seen

    def test_sharded_equals_serial(self):
        sys = half_system()
        serial = profile(sys, 2 * 10**5, workers=1)
        sharded = profile(sys, 2 * 10**5, workers=2)
        assert serial == sharded

    def test_verdicts(self):
        assert profile(kesten_system(), 10**4).verdict() == "bounded-consistent"
        assert profile(half_system(), 10**5).verdict() == "unbounded-consistent"
        assert profile(half_system(), 10**3).verdict() == "inconclusive"

    def test_bounded_oren_window_creeps_but_reads_bounded(self):
        # the combined two-interval window is Oren-bounded; its exact decade
        # maxima still increase (the sup is approached, not attained), by far
        # less than the heuristic slack
        win = parse_window("[0,1/3) [-2/3+1*xi, 5-3*xi)", SQRT2)
        p = profile(RotationSystem(SQRT2, SQRT2.zero, win), 10**5)
        decs = p.decade_values()
        assert any(a != b for a, b in zip(decs, decs[1:]))
        assert (decs[-1] - decs[1] - DiscrepancyProfile.FLAT_SLACK).sign() < 0
        assert p.verdict() == "bounded-consistent"

    def test_requires_minimum_range(self):
        with pytest.raises(ValueError):
            profile(kesten_system(), 50)

    def test_csv_output(self):
        p = profile(kesten_system(), 200)
        buf = io.StringIO()
        p.to_csv(buf)
        text = buf.getvalue()
        assert text.startswith("# xi = sqrt(2)\n")
        assert "# window = [0, -1+1*xi)" in text
        header = text.splitlines()[4]
        assert header == "N,D_signed,absD,decade_max,D_signed_exact,decade_max_exact"
        last = text.splitlines()[-1].split(",")
        assert last[0] == "200"
        assert last[5] == "1"  # exact running sup


class TestCochain:
    def test_single_term_reduces_to_disc(self):
        sys = kesten_system()
        c = Cochain(((Fraction(1), PatternSpec(frozenset({0}))),))
        val = cochain_discrepancy(c, sys, (0, 500))
        pts = orbit_hits(sys, 0, 499)
        assert val == disc(pts, (0, 500), sys.window.total_length(), signed=True)

    def test_cancellation(self):
        sys = kesten_system()
        p = PatternSpec(frozenset({0, 2}))
        c = Cochain(((Fraction(1), p),), dx=Fraction(3))
        c_neg = Cochain(((Fraction(-1), p),))
        for interval in ((0, 100), (7, 321)):
            total = cochain_discrepancy(c, sys, interval) + cochain_discrepancy(
                c_neg, sys, interval
            )
            assert total == SQRT2.zero

    def test_distinct_patterns_required(self):
        p = PatternSpec(frozenset({0}))
        with pytest.raises(ValueError):
            Cochain(((Fraction(1), p), (Fraction(-1), p)))

    def test_linearity_randomized(self):
        rng = random.Random(51)
        sys = RotationSystem(
            SQRT2, SQRT2.zero, parse_window("[0,1/3) [-2/3+1*xi, 5-3*xi)", SQRT2)
        )
        pats = [
            PatternSpec(frozenset({0})),
            PatternSpec(frozenset({0, 2})),
            PatternSpec(frozenset({0}), frozenset({1})),
        ]
        for _ in range(5):
            c1 = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            c2 = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            pa, pb = rng.sample(pats, 2)
            interval = (rng.randint(-50, 0), rng.randint(1, 300))
            combined = Cochain(((c1, pa), (c2, pb)))
            split = (
                cochain_discrepancy(Cochain(((c1, pa),)), sys, interval)
                + cochain_discrepancy(Cochain(((c2, pb),)), sys, interval)
            )
            assert cochain_discrepancy(combined, sys, interval) == split

    def test_two_term_against_direct_count(self):
        sys = RotationSystem(
            SQRT2, SQRT2.zero, parse_window("[0,1/3) [-2/3+1*xi, 5-3*xi)", SQRT2)
        )
        from cutproject.acceptance import indicator_hits, pattern_density

        pats = (PatternSpec(frozenset({0})), PatternSpec(frozenset({0, 1})))
        c = Cochain(((Fraction(2), pats[0]), (Fraction(-1), pats[1])))
        x0, x1 = 3, 777
        total = cochain_discrepancy(c, sys, (x0, x1))
        expect = SQRT2.zero
        for coeff, p in c.terms:
            count = len(indicator_hits(sys, p, x0, x1 - 1))
            expect = expect + coeff * (
                SQRT2.real(count) - pattern_density(sys, p) * (x1 - x0)
            )
        assert total == expect

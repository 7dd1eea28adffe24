import io
import random
from fractions import Fraction

import pytest

from cutproject.bdmatch import (
    EmptyPattern,
    MatchingWitness,
    build_witness,
    optimality_check,
)
from cutproject.discrepancy import profile
from cutproject.exactnum import XiSpec
from cutproject.patterns import RotationSystem, Window, orbit_hits

SQRT2 = XiSpec.sqrt(2)


def kesten_system():
    return RotationSystem(SQRT2, SQRT2.zero, Window.single(SQRT2.zero, SQRT2.real(-1, 1)))


def half_system():
    return RotationSystem(
        SQRT2, SQRT2.zero, Window.single(SQRT2.zero, SQRT2.real(Fraction(1, 2)))
    )


class TestBuildWitness:
    def test_rigid_shift(self):
        pts = [Fraction(3, 10) + i for i in range(20)]
        witness = build_witness(pts, 1)
        assert witness.offset == 0
        assert witness.sup_displacement == Fraction(3, 10)
        assert witness.recompute_sup() == Fraction(3, 10)

    def test_lattice_pairs_are_consecutive_and_monotone(self):
        witness = build_witness([0, 3, 5, 8, 10], SQRT2.real(-1, 1))
        lats = [lat for _, lat, _ in witness.pairs()]
        assert all((b - a).sign() > 0 for a, b in zip(lats, lats[1:]))
        diffs = {str(b - a) for a, b in zip(lats, lats[1:])}
        assert diffs == {str(1 / SQRT2.real(-1, 1))}

    def test_flagship_sup_stable_as_range_grows(self):
        # bounded window: the sup creeps toward (but never exceeds) 1; the
        # movement between desk-scale ranges is tiny
        sys = kesten_system()
        delta = SQRT2.real(-1, 1)
        sups = []
        for n in (10**4, 4 * 10**4):
            pts = orbit_hits(sys, 0, n)
            sups.append(build_witness(pts, delta).sup_displacement)
        assert (sups[1] - sups[0] - Fraction(1, 100)).sign() < 0
        assert all((s - 1).sign() < 0 for s in sups)

    def test_unbounded_window_displacement_grows(self):
        sys = half_system()
        sups = []
        for n in (10**3, 10**4, 10**5):
            pts = orbit_hits(sys, 0, n)
            sups.append(build_witness(pts, Fraction(1, 2)).sup_displacement)
        assert sups[0] < sups[1]
        assert sups[1] <= sups[2]
        assert sups[2] >= 2 * sups[0]

    def test_requires_two_points_and_positive_delta(self):
        with pytest.raises(EmptyPattern):
            build_witness([5], 1)
        with pytest.raises(ValueError):
            build_witness([0, 1], Fraction(-1, 2))

    def test_fast_paths_agree_with_generic(self):
        rng = random.Random(31)
        for _ in range(20):
            pts = sorted(rng.sample(range(-100, 400), rng.randint(2, 40)))
            delta = rng.choice(
                [Fraction(rng.randint(1, 9), rng.randint(1, 9)), SQRT2.real(-1, 1)]
            )
            fast = build_witness(pts, delta)
            shifted = [Fraction(p) for p in pts]  # forces the generic route
            generic = build_witness(shifted, delta)
            assert fast.offset == generic.offset
            assert fast.sup_displacement == generic.sup_displacement

    def test_displacement_discrepancy_bound(self):
        # monotone matching: sup*delta <= max|D| + 1 over the scanned range
        sys = kesten_system()
        delta = SQRT2.real(-1, 1)
        n = 10**4
        pts = orbit_hits(sys, 0, n)
        witness = build_witness(pts, delta)
        sup_times_delta = witness.sup_displacement * delta
        bound = profile(sys, n).sup_seen + 1
        assert (bound - sup_times_delta).sign() > 0


class TestOptimality:
    def test_two_point_example(self):
        # lattice points 0.4, 0.6: monotone sup 0.4 beats crossed sup 0.6
        witness = build_witness([0, 1], 5)
        assert witness.offset == 2
        assert [lat for _, lat, _ in witness.pairs()] == [
            Fraction(2, 5),
            Fraction(3, 5),
        ]
        assert witness.sup_displacement == Fraction(2, 5)
        assert optimality_check([0, 1], 5)

    def test_small_sorted_instances_optimal(self):
        rng = random.Random(32)
        for _ in range(40):
            pts = sorted(rng.sample(range(0, 60), rng.randint(2, 8)))
            delta = Fraction(rng.randint(1, 6), rng.randint(1, 6))
            assert optimality_check(pts, delta)

    def test_xireal_instances_optimal(self):
        rng = random.Random(33)
        sys = kesten_system()
        delta = SQRT2.real(-1, 1)
        pts = list(orbit_hits(sys, 0, 40))
        for _ in range(10):
            sub = sorted(rng.sample(pts, 9))
            assert optimality_check(sub, delta)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            optimality_check(list(range(13)), 1)


class TestSerialization:
    def test_roundtrip_rational(self):
        witness = build_witness([0, 2, 5, 9], Fraction(1, 2))
        buf = io.StringIO()
        witness.to_csv(buf)
        buf.seek(0)
        loaded = MatchingWitness.from_csv(buf)
        assert loaded == witness

    def test_roundtrip_xireal(self):
        pts = orbit_hits(kesten_system(), 0, 60)
        witness = build_witness(pts, SQRT2.real(-1, 1))
        buf = io.StringIO()
        witness.to_csv(buf)
        text = buf.getvalue()
        assert text.splitlines()[0] == "# xi = sqrt(2)"
        assert "y,lattice_point,displacement" in text
        loaded = MatchingWitness.from_csv(io.StringIO(text))
        assert loaded == witness

    def test_corrupt_sup_rejected(self):
        witness = build_witness([0, 2, 5, 9], Fraction(1, 2))
        buf = io.StringIO()
        witness.to_csv(buf)
        text = buf.getvalue().replace("# sup_displacement = ", "# sup_displacement = 7+", 1)
        with pytest.raises(ValueError):
            MatchingWitness.from_csv(io.StringIO(text))

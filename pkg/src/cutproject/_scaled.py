"""Integer-scaled incremental scanner for rotation orbits (internal).

Every quantity a scan touches lives in Q(xi) with a fixed quadratic
irrational xi = p + q*sqrt(d).  After clearing denominators by a common
modulus M, each value becomes an integer pair (A, B) standing for
(A + B*sqrt(d)) / M, so the orbit's fractional part advances by integer
additions and every comparison is an integer sign test that needs at
most two multiplications (compare A^2 against B^2*d; a tie there is
impossible for squarefree d unless both parts vanish, which is exactly
value equality).  No floating point anywhere.

The sign-test blocks are inlined in the hot loops on purpose; the
readable reference implementation is ``exactnum.XiReal.sign``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt, lcm
from typing import Optional, Sequence

from .exactnum import XiReal, XiSpec

_NO_REC = -(10**30)  # sentinel k that is never scanned


@dataclass(frozen=True)
class ScaledSystem:
    d: int
    m: int
    base: tuple[int, int]  # reduced basepoint, scaled radical pair
    step: tuple[int, int]  # frac(xi), scaled radical pair
    xi_pair: tuple[int, int]  # xi itself, scaled radical pair
    ivals: tuple[tuple[int, int, int, int], ...]  # (lo_a, lo_b, hi_a, hi_b)
    length: tuple[int, int]  # total window length, scaled radical pair
    xi: XiSpec
    basepoint: XiReal

    def state_at(self, k: int) -> tuple[int, int]:
        """Scaled radical pair of frac(basepoint + k*xi)."""
        a = self.base[0] + k * self.xi_pair[0]
        b = self.base[1] + k * self.xi_pair[1]
        n = _floor_pair(a, b, self.m, self.d)
        return a - n * self.m, b

    def unscale(self, pair: tuple[int, int]) -> XiReal:
        """Convert a scaled radical pair back to an exact field element."""
        return unscale_pair(self.xi, self.m, pair)


def unscale_pair(xi: XiSpec, m: int, pair: tuple[int, int]) -> XiReal:
    """Exact field element for the scaled radical pair (A + B*sqrt(d)) / m."""
    from fractions import Fraction

    b = Fraction(pair[1], m) / xi.q
    return XiReal(Fraction(pair[0], m) - b * xi.p, b, xi)


def _floor_pair(a: int, b: int, m: int, d: int) -> int:
    """Exact floor of (a + b*sqrt(d)) / m for integers a, b and m > 0."""
    if b == 0:
        t = 0
    elif b > 0:
        t = isqrt(b * b * d)
    else:
        t = -isqrt(b * b * d) - 1  # b^2*d is never a perfect square for b != 0
    n0 = (a + t) // m
    # value lies in [(a+t)/m, (a+t+1)/m); floor is n0 or n0 + 1
    a2 = a - (n0 + 1) * m
    if a2 >= 0:
        ge = b >= 0 or a2 * a2 > b * b * d
    else:
        ge = b > 0 and b * b * d > a2 * a2
    return n0 + 1 if ge else n0


def scale_system(
    xi: XiSpec, basepoint: XiReal, intervals: Sequence[tuple[XiReal, XiReal]]
) -> ScaledSystem:
    step_frac, _ = xi.xi_real.fractional_part()
    values = [basepoint, step_frac, xi.xi_real]
    for lo, hi in intervals:
        values.append(lo)
        values.append(hi)
    pairs = [v.radical_pair() for v in values]
    m = 1
    for A, B in pairs:
        m = lcm(m, A.denominator, B.denominator)
    scaled = [(int(A * m), int(B * m)) for A, B in pairs]
    epairs = scaled[3:]
    ivals = tuple(
        (epairs[2 * i][0], epairs[2 * i][1], epairs[2 * i + 1][0], epairs[2 * i + 1][1])
        for i in range(len(intervals))
    )
    length = (
        sum(hi_a - lo_a for lo_a, _, hi_a, _ in ivals),
        sum(hi_b - lo_b for _, lo_b, _, hi_b in ivals),
    )
    return ScaledSystem(
        d=xi.d,
        m=m,
        base=scaled[0],
        step=scaled[1],
        xi_pair=scaled[2],
        ivals=ivals,
        length=length,
        xi=xi,
        basepoint=basepoint,
    )


def find_singular(ss: ScaledSystem, k_min: int, k_max: int) -> Optional[int]:
    """Smallest k in range whose orbit point equals a window endpoint exactly.

    The sqrt(d)-coefficient of frac(basepoint + k*xi) is base_b + k*q*M,
    strictly monotone in k, so each endpoint can be hit at most once; the
    candidate k solves a linear equation and is then verified exactly.
    """
    xb = ss.base[1]
    qb = ss.xi_pair[1]
    targets = set()
    for lo_a, lo_b, hi_a, hi_b in ss.ivals:
        targets.add((lo_a, lo_b))
        # the endpoint value 1 is the circle point 0
        targets.add((0, 0) if (hi_a, hi_b) == (ss.m, 0) else (hi_a, hi_b))
    best: Optional[int] = None
    for ea, eb in targets:
        if (eb - xb) % qb:
            continue
        k = (eb - xb) // qb
        if k_min <= k <= k_max and ss.state_at(k) == (ea, eb):
            best = k if best is None else min(best, k)
    return best


def collect_hits(ss: ScaledSystem, k_min: int, k_max: int) -> list[int]:
    """All k in [k_min, k_max] whose orbit point lies in the window.

    Single pass with an incremental fractional-part update: add frac(xi),
    conditionally subtract 1.  No per-k floor computation.
    """
    if k_min > k_max:
        return []
    d = ss.d
    m = ss.m
    p, q = ss.step
    ivals = ss.ivals
    a, b = ss.state_at(k_min - 1)
    out = []
    append = out.append
    for k in range(k_min, k_max + 1):
        a += p
        b += q
        a1 = a - m
        if a1 >= 0:
            if b >= 0 or a1 * a1 > b * b * d:
                a = a1
        elif b > 0 and b * b * d > a1 * a1:
            a = a1
        for lo_a, lo_b, hi_a, hi_b in ivals:
            a2 = a - lo_a
            b2 = b - lo_b
            if a2 >= 0:
                ge = b2 >= 0 or a2 * a2 > b2 * b2 * d
            else:
                ge = b2 > 0 and b2 * b2 * d > a2 * a2
            if not ge:
                continue
            a2 = a - hi_a
            b2 = b - hi_b
            if a2 >= 0:
                lt = b2 < 0 and b2 * b2 * d > a2 * a2
            else:
                lt = b2 <= 0 or a2 * a2 > b2 * b2 * d
            if lt:
                append(k)
                break
    return out


def count_hits(ss: ScaledSystem, k_min: int, k_max: int) -> int:
    if k_min > k_max:
        return 0
    d = ss.d
    m = ss.m
    p, q = ss.step
    ivals = ss.ivals
    a, b = ss.state_at(k_min - 1)
    n = 0
    for _ in range(k_min, k_max + 1):
        a += p
        b += q
        a1 = a - m
        if a1 >= 0:
            if b >= 0 or a1 * a1 > b * b * d:
                a = a1
        elif b > 0 and b * b * d > a1 * a1:
            a = a1
        for lo_a, lo_b, hi_a, hi_b in ivals:
            a2 = a - lo_a
            b2 = b - lo_b
            if a2 >= 0:
                ge = b2 >= 0 or a2 * a2 > b2 * b2 * d
            else:
                ge = b2 > 0 and b2 * b2 * d > a2 * a2
            if not ge:
                continue
            a2 = a - hi_a
            b2 = b - hi_b
            if a2 >= 0:
                lt = b2 < 0 and b2 * b2 * d > a2 * a2
            else:
                lt = b2 <= 0 or a2 * a2 > b2 * b2 * d
            if lt:
                n += 1
                break
    return n


def collect_hits_direct(ss: ScaledSystem, k_min: int, k_max: int) -> list[int]:
    """Lattice-line enumeration: an explicit floor per column x = k.

    Independent of the incremental scanner above (no carried state), so
    the two routes cross-check each other.
    """
    if k_min > k_max:
        return []
    d = ss.d
    m = ss.m
    xa, xb = ss.base
    pa, pb = ss.xi_pair
    ivals = ss.ivals
    out = []
    for k in range(k_min, k_max + 1):
        a = xa + k * pa
        b = xb + k * pb
        n = _floor_pair(a, b, m, d)
        a -= n * m
        for lo_a, lo_b, hi_a, hi_b in ivals:
            a2 = a - lo_a
            b2 = b - lo_b
            if a2 >= 0:
                ge = b2 >= 0 or a2 * a2 > b2 * b2 * d
            else:
                ge = b2 > 0 and b2 * b2 * d > a2 * a2
            if not ge:
                continue
            a2 = a - hi_a
            b2 = b - hi_b
            if a2 >= 0:
                lt = b2 < 0 and b2 * b2 * d > a2 * a2
            else:
                lt = b2 <= 0 or a2 * a2 > b2 * b2 * d
            if lt:
                out.append(k)
                break
    return out


def collect_colored(
    ss: ScaledSystem, k_min: int, k_max: int
) -> tuple[list[int], list[int]]:
    """Hits of the hull window, labelled by interval index (1-based) or 0
    when the point lies in the hull but in none of the intervals."""
    if k_min > k_max or not ss.ivals:
        return [], []
    d = ss.d
    m = ss.m
    p, q = ss.step
    ivals = ss.ivals
    h_lo_a, h_lo_b = ivals[0][0], ivals[0][1]
    h_hi_a, h_hi_b = ivals[-1][2], ivals[-1][3]
    a, b = ss.state_at(k_min - 1)
    ks: list[int] = []
    colors: list[int] = []
    for k in range(k_min, k_max + 1):
        a += p
        b += q
        a1 = a - m
        if a1 >= 0:
            if b >= 0 or a1 * a1 > b * b * d:
                a = a1
        elif b > 0 and b * b * d > a1 * a1:
            a = a1
        # hull membership first
        a2 = a - h_lo_a
        b2 = b - h_lo_b
        if a2 >= 0:
            ge = b2 >= 0 or a2 * a2 > b2 * b2 * d
        else:
            ge = b2 > 0 and b2 * b2 * d > a2 * a2
        if not ge:
            continue
        a2 = a - h_hi_a
        b2 = b - h_hi_b
        if a2 >= 0:
            lt = b2 < 0 and b2 * b2 * d > a2 * a2
        else:
            lt = b2 <= 0 or a2 * a2 > b2 * b2 * d
        if not lt:
            continue
        color = 0
        for i, (lo_a, lo_b, hi_a, hi_b) in enumerate(ivals):
            a2 = a - lo_a
            b2 = b - lo_b
            if a2 >= 0:
                ge = b2 >= 0 or a2 * a2 > b2 * b2 * d
            else:
                ge = b2 > 0 and b2 * b2 * d > a2 * a2
            if not ge:
                continue
            a2 = a - hi_a
            b2 = b - hi_b
            if a2 >= 0:
                lt = b2 < 0 and b2 * b2 * d > a2 * a2
            else:
                lt = b2 <= 0 or a2 * a2 > b2 * b2 * d
            if lt:
                color = i + 1
                break
        ks.append(k)
        colors.append(color)
    return ks, colors


# -- discrepancy scan ----------------------------------------------------------
#
# D(N) = (hits over 0 <= k <= N) - N * Length(window); scaled by M it is the
# pair (h*M - N*len_a, -N*len_b).  Between hits D decreases strictly, so the
# running maximum can only move right after a hit and the running minimum only
# right before a hit or at a segment end; extrema updates happen there only.


def scan_chunk(
    ss: ScaledSystem, k_from: int, k_to: int, records: Sequence[int]
) -> list[tuple[int, int, int, int, int, int]]:
    """Scan k in [k_from, k_to] and report per-record-segment data.

    `records` is an increasing sequence with records[-1] == k_to; segment i
    covers (records[i-1], records[i]] (the first one starts at k_from).
    Returns one tuple per record: (N, hits_so_far_in_chunk, max_a, max_b,
    min_a, min_b), where the extrema pairs describe the chunk-relative
    discrepancy R(N) = h*M - (N - k_from + 1)*len over the segment, scaled
    by M.  Absolute values are recovered by adding the pair for
    D(k_from - 1), which the caller tracks via cumulative hit counts.
    """
    d = ss.d
    m = ss.m
    p, q = ss.step
    la, lb = ss.length
    ivals = ss.ivals
    a, b = ss.state_at(k_from - 1)
    h = 0
    da, db = 0, 0  # chunk-relative discrepancy pair
    out = []
    mx_a = mx_b = mn_a = mn_b = None
    ri = 0
    next_rec = records[0] if records else _NO_REC
    for k in range(k_from, k_to + 1):
        a += p
        b += q
        a1 = a - m
        if a1 >= 0:
            if b >= 0 or a1 * a1 > b * b * d:
                a = a1
        elif b > 0 and b * b * d > a1 * a1:
            a = a1
        hit = False
        for lo_a, lo_b, hi_a, hi_b in ivals:
            a2 = a - lo_a
            b2 = b - lo_b
            if a2 >= 0:
                ge = b2 >= 0 or a2 * a2 > b2 * b2 * d
            else:
                ge = b2 > 0 and b2 * b2 * d > a2 * a2
            if not ge:
                continue
            a2 = a - hi_a
            b2 = b - hi_b
            if a2 >= 0:
                lt = b2 < 0 and b2 * b2 * d > a2 * a2
            else:
                lt = b2 <= 0 or a2 * a2 > b2 * b2 * d
            if lt:
                hit = True
                break
        da -= la
        db -= lb
        if hit:
            h += 1
            da += m
            # previous value D(k-1) is a candidate minimum
            pa_ = da - m + la
            pb_ = db + lb
            if mn_a is None:
                mn_a, mn_b = pa_, pb_
            else:
                a2 = pa_ - mn_a
                b2 = pb_ - mn_b
                if a2 >= 0:
                    less = b2 < 0 and b2 * b2 * d > a2 * a2
                elif b2 <= 0:
                    less = True
                else:
                    less = a2 * a2 > b2 * b2 * d
                if less:
                    mn_a, mn_b = pa_, pb_
            # the new value is a candidate maximum
            if mx_a is None:
                mx_a, mx_b = da, db
            else:
                a2 = da - mx_a
                b2 = db - mx_b
                if a2 >= 0:
                    greater = (b2 >= 0 and (a2 > 0 or b2 > 0)) or (
                        b2 < 0 and a2 * a2 > b2 * b2 * d
                    )
                else:
                    greater = b2 > 0 and b2 * b2 * d > a2 * a2
                if greater:
                    mx_a, mx_b = da, db
        if k == next_rec:
            # fold the current value into both extrema and emit the segment
            if mx_a is None:
                mx_a, mx_b = da, db
                mn_a, mn_b = da, db
            else:
                a2 = da - mx_a
                b2 = db - mx_b
                if a2 >= 0:
                    greater = (b2 >= 0 and (a2 > 0 or b2 > 0)) or (
                        b2 < 0 and a2 * a2 > b2 * b2 * d
                    )
                else:
                    greater = b2 > 0 and b2 * b2 * d > a2 * a2
                if greater:
                    mx_a, mx_b = da, db
                a2 = da - mn_a
                b2 = db - mn_b
                if a2 >= 0:
                    less = b2 < 0 and b2 * b2 * d > a2 * a2
                elif b2 <= 0:
                    less = True
                else:
                    less = a2 * a2 > b2 * b2 * d
                if less:
                    mn_a, mn_b = da, db
            out.append((k, h, mx_a, mx_b, mn_a, mn_b))
            mx_a = mx_b = mn_a = mn_b = None
            ri += 1
            next_rec = records[ri] if ri < len(records) else _NO_REC
    return out


def scan_chunk_args(args) -> list[tuple[int, int, int, int, int, int]]:
    """Top-level unpacking wrapper so process pools can pickle the call."""
    return scan_chunk(*args)


def compare_pairs(d: int, x: tuple[int, int], y: tuple[int, int]) -> int:
    """Exact sign of (x - y) where both are radical pairs over sqrt(d)."""
    a2 = x[0] - y[0]
    b2 = x[1] - y[1]
    if b2 == 0:
        return (a2 > 0) - (a2 < 0)
    if a2 == 0:
        return 1 if b2 > 0 else -1
    if a2 > 0 and b2 > 0:
        return 1
    if a2 < 0 and b2 < 0:
        return -1
    lhs, rhs = a2 * a2, b2 * b2 * d
    if a2 > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1

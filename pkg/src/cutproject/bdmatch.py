"""Bounded-displacement matchings between point sets and reference lattices.

A point set of density delta is compared against the lattice
(1/delta)*Z: the monotone matching sends the i-th point (in sorted
order) to the lattice point (i + offset)/delta, with the integer offset
chosen to minimize the largest displacement.  On the line the monotone
matching is optimal for the sup cost among all bijections to the same
lattice points (uncrossing an inversion never increases the maximum),
which optimality_check verifies by brute force on small instances.

A witness is always relative to the finite range it was built from;
infinite boundedness claims come from the exact window criteria, never
from here.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import IO, Iterable, Iterator, Optional, Union

from ._scaled import compare_pairs, unscale_pair
from .exactnum import XiReal, XiSpec, parse_xireal
from .patterns import PointPattern

__all__ = ["EmptyPattern", "MatchingWitness", "build_witness", "optimality_check"]

Exact = Union[int, Fraction, XiReal]


class EmptyPattern(ValueError):
    """A matching witness needs at least two points."""


def _exact_floor(x: Exact) -> int:
    return x.floor() if isinstance(x, XiReal) else math.floor(Fraction(x))


def _is_positive(x: Exact) -> bool:
    return x.sign() > 0 if isinstance(x, XiReal) else x > 0


def _as_points(points: Union[PointPattern, Iterable[Exact]]) -> tuple[Exact, ...]:
    if isinstance(points, PointPattern):
        return points.points
    pts = tuple(points)
    for u, v in zip(pts, pts[1:]):
        if not _is_positive(v - u):
            raise ValueError("points must be strictly increasing")
    return pts


@dataclass(frozen=True)
class MatchingWitness:
    """Monotone matching y_i <-> (i + offset)/delta with its sup displacement."""

    delta: Exact
    offset: int
    sup_displacement: Exact
    points: tuple[Exact, ...]

    def lattice_point(self, i: int) -> Exact:
        return (i + self.offset) / self.delta

    def pairs(self) -> Iterator[tuple[Exact, Exact, Exact]]:
        """Yield (point, matched lattice point, signed displacement)."""
        for i, y in enumerate(self.points):
            lat = self.lattice_point(i)
            yield y, lat, y - lat

    def recompute_sup(self) -> Exact:
        return max(abs(disp) for _, _, disp in self.pairs())

    def to_csv(self, fp: IO[str]) -> None:
        if isinstance(self.delta, XiReal):
            fp.write(f"# xi = {self.delta.xi}\n")
        fp.write(f"# delta = {self.delta}\n")
        fp.write(f"# offset = {self.offset}\n")
        fp.write(f"# sup_displacement = {self.sup_displacement}\n")
        fp.write("y,lattice_point,displacement\n")
        for y, lat, disp in self.pairs():
            fp.write(f"{y},{lat},{disp}\n")

    @classmethod
    def from_csv(cls, fp: IO[str]) -> "MatchingWitness":
        header: dict[str, str] = {}
        points: list[Exact] = []
        xi: Optional[XiSpec] = None
        for line in fp:
            line = line.strip()
            if not line or line == "y,lattice_point,displacement":
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                header[key.strip()] = val.strip()
                continue
            y_text = line.split(",", 1)[0]
            if xi is None and "xi" in header:
                xi = XiSpec.parse(header["xi"])
            points.append(_parse_exact(y_text, xi))
        if "delta" not in header or "offset" not in header:
            raise ValueError("witness CSV is missing its header lines")
        if xi is None and "xi" in header:
            xi = XiSpec.parse(header["xi"])
        delta = _parse_exact(header["delta"], xi)
        if isinstance(delta, int):
            delta = Fraction(delta)
        witness = cls(
            delta=delta,
            offset=int(header["offset"]),
            sup_displacement=_parse_exact(header["sup_displacement"], xi),
            points=tuple(points),
        )
        if witness.recompute_sup() != witness.sup_displacement:
            raise ValueError("witness CSV sup_displacement does not recompute")
        return witness


_INT_RE = re.compile(r"[+-]?\d+")


def _parse_exact(text: str, xi: Optional[XiSpec]) -> Exact:
    if _INT_RE.fullmatch(text):
        return int(text)
    if "xi" in text:
        if xi is None:
            raise ValueError(f"value {text!r} needs an `# xi = ...` header")
        return parse_xireal(text, xi)
    return Fraction(text)


def _residue_extrema(points: tuple[Exact, ...], delta: Exact) -> tuple[Exact, Exact]:
    """Exact (min, max) of r_i = y_i*delta - i over the sorted points."""
    all_int = all(isinstance(y, int) for y in points)
    if all_int and isinstance(delta, XiReal):
        A, B = delta.radical_pair()
        m = lcm(A.denominator, B.denominator)
        a, b = int(A * m), int(B * m)
        d = delta.xi.d
        lo = hi = (points[0] * a, points[0] * b)
        for i, y in enumerate(points[1:], 1):
            cand = (y * a - i * m, y * b)
            if compare_pairs(d, cand, hi) > 0:
                hi = cand
            elif compare_pairs(d, cand, lo) < 0:
                lo = cand
        return unscale_pair(delta.xi, m, lo), unscale_pair(delta.xi, m, hi)
    if all_int and isinstance(delta, (int, Fraction)):
        delta = Fraction(delta)
        num, den = delta.numerator, delta.denominator
        lo = hi = points[0] * num
        for i, y in enumerate(points[1:], 1):
            cand = y * num - i * den
            if cand > hi:
                hi = cand
            elif cand < lo:
                lo = cand
        return Fraction(lo, den), Fraction(hi, den)
    residues = [y * delta - i for i, y in enumerate(points)]
    return min(residues), max(residues)


def build_witness(
    points: Union[PointPattern, Iterable[Exact]], delta: Exact
) -> MatchingWitness:
    """Monotone matching to the lattice (1/delta)*Z with optimal integer offset.

    The displacement of point i is (r_i - offset)/delta with
    r_i = y_i*delta - i, so the optimal offset is an integer nearest to
    (min r + max r)/2; both rounding candidates are compared exactly.
    """
    pts = _as_points(points)
    if len(pts) < 2:
        raise EmptyPattern(f"need at least 2 points, got {len(pts)}")
    if isinstance(delta, int):  # keep all later divisions exact
        delta = Fraction(delta)
    if not _is_positive(delta):
        raise ValueError("delta must be positive")
    r_lo, r_hi = _residue_extrema(pts, delta)
    c0 = _exact_floor((r_lo + r_hi) / 2)
    best: Optional[tuple[Exact, int]] = None
    for c in (c0, c0 + 1):
        sup = max(r_hi - c, c - r_lo) / delta
        if best is None or sup < best[0]:
            best = (sup, c)
    return MatchingWitness(
        delta=delta, offset=best[1], sup_displacement=best[0], points=pts
    )


def optimality_check(
    points: Union[PointPattern, Iterable[Exact]],
    delta: Exact,
    *,
    size_cap: int = 12,
) -> bool:
    """True iff no bijection to the same lattice points beats the monotone one.

    Brute force over permutations (depth-first with sup-cost pruning);
    capped at size_cap points.
    """
    witness = build_witness(points, delta)
    n = len(witness.points)
    if n > size_cap:
        raise ValueError(f"optimality_check is capped at {size_cap} points, got {n}")
    lattice = [witness.lattice_point(i) for i in range(n)]
    sup = witness.sup_displacement
    used = [False] * n

    def beats(i: int) -> bool:
        if i == n:
            return True
        y = witness.points[i]
        for j in range(n):
            if used[j]:
                continue
            if abs(y - lattice[j]) < sup:
                used[j] = True
                if beats(i + 1):
                    return True
                used[j] = False
        return False

    return not beats(0)

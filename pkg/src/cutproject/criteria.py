"""Exact boundedness criteria and rank reports for windows.

A window's discrepancy is bounded precisely when its interval lengths
match up with the rotation lattice Z + Z*xi:

  - single interval (Kesten's condition): Length lies in Z + Z*xi;
  - several intervals (Oren's condition): some permutation sigma pairs
    every left endpoint a_l with a right endpoint b_sigma(l) such that
    b_sigma(l) - a_l lies in Z + Z*xi.

Geometrically, an endpoint e corresponds to the strip boundary line
y = xi*x + basepoint - e, and translating that line by an integer
vector (m', k') sends e to e - k'*xi + (terms in Z), so two boundary
lines are equivalent under integer translations exactly when their
endpoint values differ by an element of Z + Z*xi.  Boundary classes
are the equivalence classes of the 2L endpoint values under that
relation; with n classes the associated punctured-torus model has
first-cohomology rank n + 1, the bounded-discrepancy subspace always
has rank 2, and the unbounded quotient has dimension n - 1.  The
verdict is "bounded" iff every class contains as many left endpoints
as right endpoints, which happens iff the Oren matching exists; both
characterizations are computed and cross-checked.

Ranks are consequences of those counting formulas; no simplicial or
cochain machinery is built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .exactnum import XiReal, decompose_Z_plus_Zxi
from .patterns import Window

__all__ = [
    "MultiIntervalWindow",
    "KestenWitness",
    "OrenWitness",
    "BoundaryClassReport",
    "CohomologyReport",
    "kesten_condition",
    "oren_condition",
    "boundary_classes",
    "bd_verdict",
]


class MultiIntervalWindow(ValueError):
    """kesten_condition applies to single-interval windows only."""


@dataclass(frozen=True)
class KestenWitness:
    """Length(I) = k*xi + m with integer k, m."""

    k: int
    m: int


@dataclass(frozen=True)
class OrenWitness:
    """Permutation sigma with b_sigma(l) - a_l = ks[l]*xi + ms[l] exactly.

    sigma is 0-indexed: interval l's left endpoint pairs with interval
    sigma[l]'s right endpoint.
    """

    sigma: tuple[int, ...]
    ks: tuple[int, ...]
    ms: tuple[int, ...]


@dataclass(frozen=True)
class BoundaryClassReport:
    """Partition of the 2L window endpoints modulo Z + Z*xi.

    Endpoints are indexed flat as (a_1, b_1, a_2, b_2, ...): even
    indices are left endpoints, odd are right.  balance[c] counts
    (left, right) endpoints in class c.
    """

    endpoints: tuple[XiReal, ...]
    classes: tuple[tuple[int, ...], ...]
    n: int
    left_right_balance: tuple[tuple[int, int], ...]

    def balanced(self) -> bool:
        return all(left == right for left, right in self.left_right_balance)


@dataclass(frozen=True)
class CohomologyReport:
    """Rank bookkeeping and the boundedness verdict for one window."""

    n: int
    h1_rank: int  # n + 1
    bounded_subspace_rank: int  # always 2
    h1_ud_dim: int  # n - 1
    verdict: str  # "bounded" | "unbounded"
    classes: BoundaryClassReport
    witness: Optional[OrenWitness]


def kesten_condition(w: Window) -> Optional[KestenWitness]:
    """Witness that Length(I) lies in Z + Z*xi, for a single interval."""
    if len(w) != 1:
        raise MultiIntervalWindow(
            f"window has {len(w)} intervals; use oren_condition"
        )
    lo, hi = w.intervals[0]
    km = decompose_Z_plus_Zxi(hi - lo)
    if km is None:
        return None
    return KestenWitness(k=km[0], m=km[1])


def oren_condition(w: Window) -> Optional[OrenWitness]:
    """Perfect matching of left to right endpoints with differences in Z + Z*xi.

    Found by augmenting paths on the bipartite endpoint graph; reduces to
    kesten_condition when the window has a single interval.
    """
    w._require_nonempty()
    lefts = [lo for lo, _ in w.intervals]
    rights = [hi for _, hi in w.intervals]
    size = len(lefts)
    edges = [
        [decompose_Z_plus_Zxi(rights[j] - lefts[i]) for j in range(size)]
        for i in range(size)
    ]
    match_right = [-1] * size  # right index -> left index

    def augment(i: int, seen: set[int]) -> bool:
        for j in range(size):
            if edges[i][j] is not None and j not in seen:
                seen.add(j)
                if match_right[j] == -1 or augment(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    for i in range(size):
        if not augment(i, set()):
            return None
    sigma = [0] * size
    for j, i in enumerate(match_right):
        sigma[i] = j
    ks = tuple(edges[i][sigma[i]][0] for i in range(size))
    ms = tuple(edges[i][sigma[i]][1] for i in range(size))
    return OrenWitness(sigma=tuple(sigma), ks=ks, ms=ms)


def boundary_classes(w: Window) -> BoundaryClassReport:
    """Group the endpoints by congruence modulo Z + Z*xi."""
    w._require_nonempty()
    endpoints = w.endpoints()
    classes: list[list[int]] = []
    reps: list[XiReal] = []
    for idx, e in enumerate(endpoints):
        for c, rep in enumerate(reps):
            if decompose_Z_plus_Zxi(e - rep) is not None:
                classes[c].append(idx)
                break
        else:
            classes.append([idx])
            reps.append(e)
    balance = tuple(
        (sum(1 for i in cls if i % 2 == 0), sum(1 for i in cls if i % 2 == 1))
        for cls in classes
    )
    return BoundaryClassReport(
        endpoints=endpoints,
        classes=tuple(tuple(cls) for cls in classes),
        n=len(classes),
        left_right_balance=balance,
    )


def bd_verdict(w: Window) -> CohomologyReport:
    """Boundedness verdict with rank report.

    bounded iff every boundary class has equal left and right endpoint
    counts, equivalently iff the Oren matching exists; the two
    characterizations are computed independently and cross-checked.
    """
    report = boundary_classes(w)
    witness = oren_condition(w)
    balanced = report.balanced()
    if balanced != (witness is not None):
        raise RuntimeError(
            "internal inconsistency: class balance and endpoint matching disagree"
        )
    return CohomologyReport(
        n=report.n,
        h1_rank=report.n + 1,
        bounded_subspace_rank=2,
        h1_ud_dim=report.n - 1,
        verdict="bounded" if balanced else "unbounded",
        classes=report,
        witness=witness,
    )

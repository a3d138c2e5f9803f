"""Named example frames and algebras used by the check suites and tests."""

from __future__ import annotations

from fractions import Fraction

from .flags import StratifiedAlgebra, nilpotent_frame
from .polyfields import Frame, Poly, PolyField

__all__ = [
    "catalog_frames",
    "cartan_frame",
    "engel_algebra",
    "engel_frame",
    "expected_dims",
    "free_rank2_step3_algebra",
    "free_rank3_step2_algebra",
    "free_rank3_step2_frame",
    "heisenberg_algebra",
    "heisenberg_frame",
    "martinet_frame",
    "rank4_step2_algebra",
    "rank4_step2_frame",
]


def _field(n: int, entries: dict[int, Poly | int]) -> PolyField:
    comps = []
    for j in range(1, n + 1):
        e = entries.get(j, 0)
        comps.append(e if isinstance(e, Poly) else Poly.const(n, e))
    return PolyField(tuple(comps))


def heisenberg_frame() -> Frame:
    """(d1, d2 + x1*d3) on R^3: growth (2, 3)."""
    n = 3
    x1 = Poly.variable(n, 1)
    return Frame(n, (_field(n, {1: 1}), _field(n, {2: 1, 3: x1})))


def martinet_frame() -> Frame:
    """(d1, d2 + x1^2*d3) on R^3: growth (2, 2, 3) at the origin, not maximal."""
    n = 3
    x1sq = Poly.variable(n, 1) ** 2
    return Frame(n, (_field(n, {1: 1}), _field(n, {2: 1, 3: x1sq})))


def engel_frame() -> Frame:
    """(d1, d2 + x1*d3 + x1^2/2*d4) on R^4: growth (2, 3, 4)."""
    n = 4
    x1 = Poly.variable(n, 1)
    half_sq = x1 * x1 * Fraction(1, 2)
    return Frame(n, (_field(n, {1: 1}), _field(n, {2: 1, 3: x1, 4: half_sq})))


def heisenberg_algebra() -> StratifiedAlgebra:
    return StratifiedAlgebra((2, 1), {(1, 2): {3: Fraction(1)}})


def engel_algebra() -> StratifiedAlgebra:
    return StratifiedAlgebra(
        (2, 1, 1), {(1, 2): {3: Fraction(1)}, (1, 3): {4: Fraction(1)}}
    )


def free_rank2_step3_algebra() -> StratifiedAlgebra:
    return StratifiedAlgebra(
        (2, 1, 2),
        {
            (1, 2): {3: Fraction(1)},
            (1, 3): {4: Fraction(1)},
            (2, 3): {5: Fraction(1)},
        },
    )


def free_rank3_step2_algebra() -> StratifiedAlgebra:
    return StratifiedAlgebra(
        (3, 3),
        {
            (1, 2): {4: Fraction(1)},
            (1, 3): {5: Fraction(1)},
            (2, 3): {6: Fraction(1)},
        },
    )


def rank4_step2_algebra() -> StratifiedAlgebra:
    """Step-2 stratification (4, 2): maximal growth (4, 6), not free type."""
    return StratifiedAlgebra(
        (4, 2),
        {
            (1, 2): {5: Fraction(1)},
            (3, 4): {6: Fraction(1)},
            (1, 3): {6: Fraction(1)},
            (2, 4): {5: Fraction(1)},
        },
    )


def cartan_frame() -> Frame:
    """Left-invariant rank-2 frame on R^5 with growth (2, 3, 5)."""
    return nilpotent_frame(free_rank2_step3_algebra())


def free_rank3_step2_frame() -> Frame:
    """Left-invariant rank-3 frame on R^6 with growth (3, 6)."""
    return nilpotent_frame(free_rank3_step2_algebra())


def rank4_step2_frame() -> Frame:
    return nilpotent_frame(rank4_step2_algebra())


def catalog_frames() -> dict[str, Frame]:
    return {
        "heisenberg": heisenberg_frame(),
        "martinet": martinet_frame(),
        "engel": engel_frame(),
        "cartan": cartan_frame(),
        "free3": free_rank3_step2_frame(),
    }


def expected_dims() -> dict[str, tuple[int, ...]]:
    """Flag dimensions at the origin for each catalog frame."""
    return {
        "heisenberg": (2, 3),
        "martinet": (2, 2, 3),
        "engel": (2, 3, 4),
        "cartan": (2, 3, 5),
        "free3": (3, 6),
    }

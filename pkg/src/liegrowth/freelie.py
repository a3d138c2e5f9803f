"""Hall bases of free Lie algebras, Witt dimensions and maximal growth vectors.

Bracket expressions are binary trees over generators ``X_1 .. X_k``.  The
total order used everywhere orders expressions by length first, then
lexicographically by structure: compare left subtrees, tie-break by right
subtrees, leaves compare by generator index.  A layer of a Hall set collects
the admissible expressions of one length in this order, so output is
deterministic.  Within each length the order is one valid choice among many;
layer *sizes* are forced (they must match the Witt dimension, which is
asserted during generation), layer *contents* are not canonical.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .errors import CapExceeded, DomainError

__all__ = [
    "BracketExpr",
    "GrowthVector",
    "HallBasis",
    "hall_basis",
    "is_free_type",
    "is_hall_element",
    "maximal_growth_vector",
    "mobius",
    "witt_dimension",
]


def mobius(m: int) -> int:
    """Classical Moebius function of a positive integer."""
    if m < 1:
        raise DomainError(f"mobius is defined for m >= 1, got {m}")
    count = 0
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            count += 1
        else:
            p += 1
    if m > 1:
        count += 1
    return -1 if count % 2 else 1


def witt_dimension(k: int, length: int) -> int:
    """Dimension of the degree-``length`` layer of the free Lie algebra on
    ``k`` generators: (1/length) * sum over d | length of mu(d) * k**(length/d).

    Computed in arbitrary-precision integers; exact divisibility is asserted.
    """
    if k < 1 or length < 1:
        raise DomainError("witt_dimension needs k >= 1 and length >= 1")
    total = 0
    for d in range(1, length + 1):
        if length % d == 0:
            total += mobius(d) * k ** (length // d)
    if total % length != 0:
        raise AssertionError(
            f"Witt sum {total} not divisible by {length} for k={k}"
        )
    return total // length


@dataclass(frozen=True)
class GrowthVector:
    """Strictly increasing flag dimensions; the step is the entry count."""

    entries: tuple[int, ...]

    @property
    def step(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


def maximal_growth_vector(k: int, n: int) -> GrowthVector:
    """Entrywise-maximal growth vector of a rank-``k`` frame on dimension ``n``:
    cumulative Witt sums truncated so the last entry is ``n``.
    """
    if k < 2 or k >= n:
        raise DomainError(f"maximal growth vector needs 2 <= k < n, got k={k}, n={n}")
    entries = []
    total = 0
    length = 0
    while total < n:
        length += 1
        total += witt_dimension(k, length)
        entries.append(min(total, n))
    return GrowthVector(tuple(entries))


def is_free_type(gv: GrowthVector, k: int) -> bool:
    """True when the final entry equals the untruncated cumulative Witt sum,
    i.e. no truncation happened at the last step.
    """
    total = sum(witt_dimension(k, i) for i in range(1, gv.step + 1))
    return gv.entries[-1] == total


@dataclass(frozen=True)
class BracketExpr:
    """Element of the free magma: a leaf ``X_g`` or a pair ``[left, right]``."""

    gen: int | None
    left: BracketExpr | None
    right: BracketExpr | None
    length: int

    @staticmethod
    def leaf(g: int) -> BracketExpr:
        if g < 1:
            raise DomainError(f"generator index must be positive, got {g}")
        return BracketExpr(g, None, None, 1)

    @staticmethod
    def pair(a: BracketExpr, b: BracketExpr) -> BracketExpr:
        return BracketExpr(None, a, b, a.length + b.length)

    @property
    def is_leaf(self) -> bool:
        return self.gen is not None

    def leaves(self):
        """Generator indices in left-to-right order (with multiplicity)."""
        if self.is_leaf:
            yield self.gen
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()

    def __str__(self) -> str:
        if self.is_leaf:
            return f"X{self.gen}"
        return f"[{self.left}, {self.right}]"

    def __lt__(self, other: BracketExpr) -> bool:
        return _key(self) < _key(other)

    def __le__(self, other: BracketExpr) -> bool:
        return _key(self) <= _key(other)


@functools.lru_cache(maxsize=None)
def _key(e: BracketExpr):
    if e.is_leaf:
        return (1, (e.gen,))
    return (e.length, (_key(e.left), _key(e.right)))


@dataclass(frozen=True)
class HallBasis:
    """Layers of a Hall set: ``layers[i]`` holds the length-``i+1`` elements,
    each layer sorted by the global order.
    """

    k: int
    layers: tuple[tuple[BracketExpr, ...], ...]

    def layer(self, length: int) -> tuple[BracketExpr, ...]:
        if not 1 <= length <= len(self.layers):
            raise DomainError(f"layer {length} not generated (max {len(self.layers)})")
        return self.layers[length - 1]

    def elements(self):
        return itertools.chain.from_iterable(self.layers)


def _is_admissible_pair(a: BracketExpr, b: BracketExpr) -> bool:
    """Condition on [a, b] given a, b already in the Hall set: a < b and
    b is a leaf or b = [c, d] with c <= a.
    """
    if not a < b:
        return False
    return b.is_leaf or b.left <= a


def hall_basis(k: int, max_len: int, cap: int = 100_000) -> HallBasis:
    """Generate Hall-set layers up to ``max_len``, checking each layer size
    against the Witt dimension.  ``cap`` bounds the total element count.
    """
    if k < 1 or max_len < 1:
        raise DomainError("hall_basis needs k >= 1 and max_len >= 1")
    layers: list[tuple[BracketExpr, ...]] = [
        tuple(BracketExpr.leaf(g) for g in range(1, k + 1))
    ]
    total = k
    for length in range(2, max_len + 1):
        cands = []
        for la in range(1, length // 2 + 1):
            lb = length - la
            for a in layers[la - 1]:
                for b in layers[lb - 1]:
                    if _is_admissible_pair(a, b):
                        cands.append(BracketExpr.pair(a, b))
        cands.sort(key=_key)
        expected = witt_dimension(k, length)
        if len(cands) != expected:
            raise AssertionError(
                f"layer {length} has {len(cands)} elements, Witt predicts {expected}"
            )
        total += len(cands)
        if total > cap:
            raise CapExceeded(
                f"Hall basis would exceed {cap} elements at length {length}"
            )
        layers.append(tuple(cands))
    return HallBasis(k, tuple(layers))


def is_hall_element(e: BracketExpr, basis: HallBasis) -> bool:
    """Membership in the Hall set that ``basis`` samples, decided recursively
    from the defining conditions under the fixed total order.  The result does
    not depend on how many layers of ``basis`` were generated.
    """
    for g in e.leaves():
        if g > basis.k:
            raise DomainError(f"generator X{g} out of range 1..{basis.k}")

    def member(x: BracketExpr) -> bool:
        if x.is_leaf:
            return True
        return (
            member(x.left)
            and member(x.right)
            and _is_admissible_pair(x.left, x.right)
        )

    return member(e)

"""Lie flags of concrete frames, stratified algebras and nilpotent frames.

Flag dimensions are computed from a Hall-indexed spanning set: the evaluated
brackets of Hall-set expressions of length up to the step.  Chains of every
shape span the same layers (antisymmetry and the Jacobi identity reduce any
bracket to combinations of Hall elements of the same length), which the
optional cross-check verifies by evaluating the full chain family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import jetalg, linalg
from .errors import (
    DegenerateFrame,
    DomainError,
    InvalidAlgebra,
    OrderOverflow,
)
from .freelie import BracketExpr, hall_basis, is_free_type, maximal_growth_vector
from .polyfields import (
    Frame,
    Poly,
    PolyField,
    frame_change,
    poly_lie_bracket,
    pushforward,
)

__all__ = [
    "AlgebraValidation",
    "FlagReport",
    "Frame",
    "PolyField",
    "StratifiedAlgebra",
    "formal_flag",
    "frame_change",
    "left_invariant_extensions",
    "lie_flag",
    "nilpotent_frame",
    "poly_lie_bracket",
    "pushforward",
    "validate_algebra",
]


@dataclass(frozen=True)
class FlagReport:
    """Flag dimensions of a frame at a point.

    ``dims[i]`` is the rank of all brackets of length <= i+1 evaluated at the
    point; computation stops once the ambient dimension is reached.  ``step``
    is the index where the dims first hit the ambient dimension, or the start
    of the final constant stretch otherwise.  ``maximal`` means the dims equal
    the maximal growth vector.  ``irregular`` flags a stall followed by
    growth, which certifies the point is not regular for the frame.
    """

    p: tuple[Fraction, ...]
    dims: tuple[int, ...]
    step: int
    maximal: bool
    free_type: bool
    irregular: bool


def _report_from_dims(k: int, n: int, point, dims: list[int]) -> FlagReport:
    if dims[-1] == n:
        step = len(dims)
    else:
        step = len(dims)
        while step > 1 and dims[step - 2] == dims[-1]:
            step -= 1
    irregular = any(
        dims[i] == dims[i - 1] and dims[j] > dims[i]
        for i in range(1, len(dims))
        for j in range(i + 1, len(dims))
    )
    maximal = False
    free = False
    if 2 <= k < n:
        gv = maximal_growth_vector(k, n)
        maximal = tuple(dims) == gv.entries
        free = maximal and is_free_type(gv, k)
    elif k == n:
        maximal = tuple(dims) == (n,)
        free = maximal
    return FlagReport(
        tuple(Fraction(x) for x in point), tuple(dims), step, maximal, free, irregular
    )


def _hall_exprs_by_len(k: int, max_len: int):
    return hall_basis(k, max_len).layers


def _all_chains(k: int, max_len: int):
    for ln in range(1, max_len + 1):
        yield from itertools.product(range(1, k + 1), repeat=ln)


def lie_flag(fr: Frame, point, max_step: int, cross_check: bool = False) -> FlagReport:
    """Exact flag dimensions of a polynomial frame at a rational point."""
    if max_step < 1:
        raise DomainError("max_step must be >= 1")
    n, k = fr.n, fr.k
    values = fr.values_at(point)
    if linalg.rank(values) < k:
        raise DegenerateFrame(f"frame vectors dependent at {tuple(point)}")
    layers = _hall_exprs_by_len(k, max_step)
    cache: dict[BracketExpr, PolyField] = {}

    def field_of(expr: BracketExpr) -> PolyField:
        got = cache.get(expr)
        if got is None:
            if expr.is_leaf:
                got = fr.fields[expr.gen - 1]
            else:
                got = poly_lie_bracket(field_of(expr.left), field_of(expr.right))
            cache[expr] = got
        return got

    dims = []
    vectors: list = []
    for i in range(1, max_step + 1):
        for expr in layers[i - 1]:
            vectors.append(field_of(expr).value_at(point))
        dims.append(linalg.rank(vectors))
        if cross_check:
            chain_vecs = []
            chain_cache: dict[tuple, PolyField] = {}
            for chain in _all_chains(k, i):
                cur = chain_cache.get(chain)
                if cur is None:
                    if len(chain) == 1:
                        cur = fr.fields[chain[0] - 1]
                    else:
                        cur = poly_lie_bracket(
                            fr.fields[chain[0] - 1], chain_cache[chain[1:]]
                        )
                    chain_cache[chain] = cur
                chain_vecs.append(cur.value_at(point))
            if linalg.rank(chain_vecs) != dims[-1]:
                raise AssertionError(
                    f"Hall-indexed span disagrees with the full chain span at length {i}"
                )
        if dims[-1] == n:
            break
    return _report_from_dims(k, n, point, dims)


def formal_flag(
    jet: jetalg.JetPoint, max_step: int, cross_check: bool = False
) -> FlagReport:
    """Flag dimensions computed purely from a jet via bracket symbols."""
    if max_step < 1:
        raise DomainError("max_step must be >= 1")
    if max_step > jet.order + 1:
        raise OrderOverflow(
            f"step {max_step} needs jet order {max_step - 1}, have {jet.order}"
        )
    k, n = jet.k, jet.n
    r = jet.order + 1
    zero_jet = [
        [jet[jetalg.JetVar(fld, comp, ())] for comp in range(1, n + 1)]
        for fld in range(1, k + 1)
    ]
    if linalg.rank(zero_jet) < k:
        raise DegenerateFrame("0-jet vectors are dependent")
    layers = _hall_exprs_by_len(k, max_step)
    cache: dict[BracketExpr, jetalg.DiffVec] = {}

    def symbol_of(expr: BracketExpr) -> jetalg.DiffVec:
        got = cache.get(expr)
        if got is None:
            if expr.is_leaf:
                got = jetalg.bracket((expr.gen,), k, n, r)
            else:
                got = jetalg.diffvec_bracket(
                    symbol_of(expr.left), symbol_of(expr.right)
                )
            cache[expr] = got
        return got

    dims = []
    vectors: list = []
    for i in range(1, max_step + 1):
        for expr in layers[i - 1]:
            vectors.append(jetalg.evaluate(symbol_of(expr), jet))
        dims.append(linalg.rank(vectors))
        if cross_check:
            chain_vecs = [
                jetalg.evaluate(jetalg.bracket(chain, k, n, r), jet)
                for chain in _all_chains(k, i)
            ]
            if linalg.rank(chain_vecs) != dims[-1]:
                raise AssertionError(
                    f"Hall-indexed span disagrees with the full chain span at length {i}"
                )
        if dims[-1] == n:
            break
    return _report_from_dims(k, n, jet.base, dims)


@dataclass(frozen=True)
class StratifiedAlgebra:
    """Graded algebra data: layer dimensions and structure constants.

    ``table[(i, j)]`` with ``i < j`` maps basis indices ``m`` to the rational
    coefficient of e_m in [e_i, e_j]; omitted pairs are zero brackets and the
    antisymmetric completion is implied.
    """

    layer_dims: tuple[int, ...]
    table: dict[tuple[int, int], dict[int, Fraction]]

    def __post_init__(self):
        if not self.layer_dims or any(d < 1 for d in self.layer_dims):
            raise DomainError("layer dimensions must be positive")
        total = self.dim
        norm: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in self.table.items():
            if not (1 <= i < j <= total):
                raise DomainError(f"bracket pair ({i}, {j}) must satisfy 1 <= i < j <= {total}")
            entries = {}
            for m, c in row.items():
                if not 1 <= m <= total:
                    raise DomainError(f"target e{m} out of range 1..{total}")
                c = Fraction(c)
                if c != 0:
                    entries[m] = c
            if entries:
                norm[(i, j)] = entries
        object.__setattr__(self, "table", norm)

    @property
    def dim(self) -> int:
        return sum(self.layer_dims)

    @property
    def step(self) -> int:
        return len(self.layer_dims)

    def layer_of(self, index: int) -> int:
        acc = 0
        for lay, d in enumerate(self.layer_dims, start=1):
            acc += d
            if index <= acc:
                return lay
        raise DomainError(f"basis index {index} out of range 1..{self.dim}")

    def layer_indices(self, lay: int) -> range:
        start = sum(self.layer_dims[: lay - 1])
        return range(start + 1, start + self.layer_dims[lay - 1] + 1)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        """[e_i, e_j] as a sparse coefficient map, any i, j."""
        if i == j:
            return {}
        if i < j:
            return dict(self.table.get((i, j), {}))
        return {m: -c for m, c in self.table.get((j, i), {}).items()}

    def bracket_vectors(self, u, v) -> list[Fraction]:
        """Bilinear extension of the bracket to rational coordinate vectors."""
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u, start=1):
            if a == 0:
                continue
            for j, b in enumerate(v, start=1):
                if b == 0:
                    continue
                for m, c in self.bracket_basis(i, j).items():
                    out[m - 1] += Fraction(a) * Fraction(b) * c
        return out


@dataclass(frozen=True)
class AlgebraValidation:
    valid: bool
    kind: str | None = None
    detail: str | None = None


def validate_algebra(alg: StratifiedAlgebra) -> AlgebraValidation:
    """Check grading, the Jacobi identity, and generation by the first layer.

    Returns the first violated identity with witnesses instead of raising.
    """
    n = alg.dim
    r = alg.step
    for (i, j), row in sorted(alg.table.items()):
        target = alg.layer_of(i) + alg.layer_of(j)
        for m in sorted(row):
            if target > r:
                return AlgebraValidation(
                    False,
                    "grading",
                    f"[e{i}, e{j}] lands in layer {target} > step {r} but is nonzero",
                )
            if alg.layer_of(m) != target:
                return AlgebraValidation(
                    False,
                    "grading",
                    f"[e{i}, e{j}] has component e{m} in layer {alg.layer_of(m)}, "
                    f"expected layer {target}",
                )
    basis = [
        [Fraction(1) if idx == m else Fraction(0) for idx in range(1, n + 1)]
        for m in range(1, n + 1)
    ]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for l in range(j + 1, n + 1):
                acc = alg.bracket_vectors(alg.bracket_vectors(basis[i - 1], basis[j - 1]), basis[l - 1])
                term = alg.bracket_vectors(alg.bracket_vectors(basis[j - 1], basis[l - 1]), basis[i - 1])
                acc = [a + b for a, b in zip(acc, term)]
                term = alg.bracket_vectors(alg.bracket_vectors(basis[l - 1], basis[i - 1]), basis[j - 1])
                acc = [a + b for a, b in zip(acc, term)]
                if any(c != 0 for c in acc):
                    return AlgebraValidation(
                        False,
                        "jacobi",
                        f"Jacobi fails on (e{i}, e{j}, e{l}); defect {acc}",
                    )
    for lay in range(1, r):
        rows = []
        target = list(alg.layer_indices(lay + 1))
        for a in alg.layer_indices(1):
            for b in alg.layer_indices(lay):
                vec = alg.bracket_basis(a, b)
                rows.append([vec.get(m, Fraction(0)) for m in target])
        if linalg.rank(rows) != alg.layer_dims[lay]:
            return AlgebraValidation(
                False,
                "generation",
                f"[layer 1, layer {lay}] spans only rank {linalg.rank(rows)} of the "
                f"{alg.layer_dims[lay]}-dimensional layer {lay + 1}",
            )
    return AlgebraValidation(True)


# Linear-in-the-new-argument part of the group law in exponential coordinates:
# coefficients of ad_x^m applied to the new direction, m = 0..5.  Derived from
# the truncated tensor-algebra model (re-derived in the test suite) and locked
# here as exact rationals; valid through step 6.
BCH_LINEAR_COEFFS: tuple[Fraction, ...] = (
    Fraction(1),
    Fraction(1, 2),
    Fraction(1, 12),
    Fraction(0),
    Fraction(-1, 720),
    Fraction(0),
)


def _ad_poly(alg: StratifiedAlgebra, w: list[Poly]) -> list[Poly]:
    """ad_x(w) where x is the coordinate vector of polynomial variables."""
    n = alg.dim
    out = [Poly.zero(n) for _ in range(n)]
    for (i, j), row in alg.table.items():
        xi = Poly.variable(n, i)
        xj = Poly.variable(n, j)
        term = xi * w[j - 1] - xj * w[i - 1]
        if term.is_zero():
            continue
        for m, c in row.items():
            out[m - 1] = out[m - 1] + term * c
    return out


def left_invariant_extensions(alg: StratifiedAlgebra) -> list[PolyField]:
    """Left-invariant fields extending every basis vector, in exponential
    coordinates of the group: X_b(x) = sum_m coeff_m * ad_x^m(e_b).
    """
    report = validate_algebra(alg)
    if not report.valid:
        raise InvalidAlgebra(report)
    if alg.step > len(BCH_LINEAR_COEFFS):
        raise DomainError(
            f"left-invariant extension table covers step <= {len(BCH_LINEAR_COEFFS)}"
        )
    n = alg.dim
    fields = []
    for b in range(1, n + 1):
        cur = [
            Poly.const(n, 1) if m == b else Poly.zero(n) for m in range(1, n + 1)
        ]
        acc = [p * BCH_LINEAR_COEFFS[0] for p in cur]
        for m in range(1, alg.step):
            cur = _ad_poly(alg, cur)
            c = BCH_LINEAR_COEFFS[m]
            if c != 0:
                acc = [a + p * c for a, p in zip(acc, cur)]
        fields.append(PolyField(tuple(acc)))
    _certify_extensions(alg, fields)
    return fields


def _certify_extensions(alg: StratifiedAlgebra, fields: list[PolyField]) -> None:
    n = alg.dim
    origin = (Fraction(0),) * n
    for b, f in enumerate(fields, start=1):
        val = f.value_at(origin)
        expected = tuple(Fraction(1) if m == b else Fraction(0) for m in range(1, n + 1))
        if val != expected:
            raise RuntimeError(f"extension of e{b} does not restrict to e{b} at 0")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            got = poly_lie_bracket(fields[i - 1], fields[j - 1])
            want = PolyField.zero(n)
            for m, c in alg.bracket_basis(i, j).items():
                want = want + fields[m - 1].scale(c)
            if got != want:
                raise RuntimeError(
                    f"structure-constant identity fails for [e{i}, e{j}]"
                )


def nilpotent_frame(alg: StratifiedAlgebra) -> Frame:
    """Frame of the left-invariant extensions of the first layer.

    The returned fields satisfy the exact polynomial identity
    [X_i, X_j] = sum_m c^m_{ij} X_m against the full extension family, and
    restrict to the basis at the origin; both are checked before returning.
    """
    fields = left_invariant_extensions(alg)
    return Frame(alg.dim, tuple(fields[: alg.layer_dims[0]]))

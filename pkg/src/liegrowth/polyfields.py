"""Sparse multivariate polynomials over Q and polynomial vector fields.

A ``Poly`` in ``n`` variables maps exponent tuples to nonzero Fractions.
A ``PolyField`` is an n-tuple of coefficient polynomials for the coordinate
directions; a ``Frame`` is a k-tuple of fields sharing one ambient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import DomainError

__all__ = [
    "AffineMap",
    "Frame",
    "Poly",
    "PolyField",
    "frame_change",
    "poly_lie_bracket",
    "pushforward",
]

_ZERO = Fraction(0)


class Poly:
    """Polynomial over Q in variables x1..xn, stored sparsely."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[exps] = clean.get(exps, _ZERO) + c
                    if clean[exps] == 0:
                        del clean[exps]
        self.terms = clean

    @staticmethod
    def zero(n: int) -> Poly:
        return Poly(n)

    @staticmethod
    def const(n: int, c) -> Poly:
        return Poly(n, {(0,) * n: Fraction(c)})

    @staticmethod
    def variable(n: int, j: int) -> Poly:
        if not 1 <= j <= n:
            raise DomainError(f"variable x{j} out of range 1..{n}")
        exps = tuple(1 if i == j - 1 else 0 for i in range(n))
        return Poly(n, {exps: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        for exps, c in other.terms.items():
            v = out.get(exps, _ZERO) + c
            if v == 0:
                out.pop(exps, None)
            else:
                out[exps] = v
        p = Poly.zero(self.n)
        p.terms = out
        return p

    def __neg__(self) -> Poly:
        p = Poly.zero(self.n)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = Fraction(other)
            if c == 0:
                return Poly.zero(self.n)
            p = Poly.zero(self.n)
            p.terms = {e: v * c for e, v in self.terms.items()}
            return p
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(exps, _ZERO) + c1 * c2
                if v == 0:
                    out.pop(exps, None)
                else:
                    out[exps] = v
        p = Poly.zero(self.n)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise DomainError("negative exponents are not polynomial")
        out = Poly.const(self.n, 1)
        for _ in range(e):
            out = out * self
        return out

    def derivative(self, j: int) -> Poly:
        """Exact partial derivative with respect to x_j (1-based)."""
        out: dict = {}
        for exps, c in self.terms.items():
            e = exps[j - 1]
            if e == 0:
                continue
            new = list(exps)
            new[j - 1] = e - 1
            key = tuple(new)
            v = out.get(key, _ZERO) + c * e
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
        p = Poly.zero(self.n)
        p.terms = out
        return p

    def eval_at(self, point) -> Fraction:
        vals = [Fraction(x) for x in point]
        total = _ZERO
        for exps, c in self.terms.items():
            prod = c
            for v, e in zip(vals, exps):
                if e:
                    prod *= v**e
            total += prod
        return total

    def compose(self, subs) -> Poly:
        """Substitute x_i := subs[i] (polynomials over a common variable set)."""
        m = subs[0].n if subs else self.n
        out = Poly.zero(m)
        for exps, c in self.terms.items():
            term = Poly.const(m, c)
            for sub, e in zip(subs, exps):
                if e:
                    term = term * sub**e
            out = out + term
        return out

    def max_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _term_str(self, exps, c) -> str:
        parts = []
        if abs(c) != 1 or not any(exps):
            parts.append(str(abs(c)))
        for i, e in enumerate(exps):
            if e == 1:
                parts.append(f"x{i + 1}")
            elif e > 1:
                parts.append(f"x{i + 1}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        out = []
        for idx, (exps, c) in enumerate(items):
            s = self._term_str(exps, c)
            if idx == 0:
                out.append(s if c > 0 else f"-{s}")
            else:
                out.append(f" + {s}" if c > 0 else f" - {s}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly({self})"


@dataclass(frozen=True)
class PolyField:
    """Vector field sum(comps[j] * d_{j+1}) with polynomial coefficients."""

    comps: tuple[Poly, ...]

    @property
    def n(self) -> int:
        return len(self.comps)

    @staticmethod
    def zero(n: int) -> PolyField:
        return PolyField(tuple(Poly.zero(n) for _ in range(n)))

    @staticmethod
    def basis(n: int, j: int) -> PolyField:
        comps = tuple(
            Poly.const(n, 1) if i == j - 1 else Poly.zero(n) for i in range(n)
        )
        return PolyField(comps)

    def value_at(self, point) -> tuple[Fraction, ...]:
        return tuple(c.eval_at(point) for c in self.comps)

    def __add__(self, other: PolyField) -> PolyField:
        return PolyField(tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other: PolyField) -> PolyField:
        return PolyField(tuple(a - b for a, b in zip(self.comps, other.comps)))

    def scale(self, c) -> PolyField:
        return PolyField(tuple(p * c for p in self.comps))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.comps)

    def __str__(self) -> str:
        parts = [f"({c})*d{j + 1}" for j, c in enumerate(self.comps) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


def poly_lie_bracket(x: PolyField, y: PolyField) -> PolyField:
    """Classical bracket [X, Y]^i = sum_j (X^j dY^i/dx_j - Y^j dX^i/dx_j)."""
    if x.n != y.n:
        raise DomainError("fields live on different ambient dimensions")
    n = x.n
    comps = []
    for i in range(n):
        acc = Poly.zero(n)
        for j in range(n):
            acc = acc + x.comps[j] * y.comps[i].derivative(j + 1)
            acc = acc - y.comps[j] * x.comps[i].derivative(j + 1)
        comps.append(acc)
    return PolyField(tuple(comps))


@dataclass(frozen=True)
class Frame:
    """k-tuple of polynomial vector fields on R^n."""

    n: int
    fields: tuple[PolyField, ...]

    def __post_init__(self):
        for f in self.fields:
            if f.n != self.n:
                raise DomainError("all frame fields must share the ambient dimension")

    @property
    def k(self) -> int:
        return len(self.fields)

    def values_at(self, point) -> list[tuple[Fraction, ...]]:
        return [f.value_at(point) for f in self.fields]


@dataclass(frozen=True)
class AffineMap:
    """y = linear * x + shift with rational entries."""

    linear: tuple[tuple[Fraction, ...], ...]
    shift: tuple[Fraction, ...]

    @staticmethod
    def make(linear, shift) -> AffineMap:
        lin = tuple(tuple(Fraction(x) for x in row) for row in linear)
        return AffineMap(lin, tuple(Fraction(x) for x in shift))

    @property
    def n(self) -> int:
        return len(self.shift)

    def apply(self, point) -> tuple[Fraction, ...]:
        return tuple(
            linalg.dot(row, point) + s for row, s in zip(self.linear, self.shift)
        )

    def inverse(self) -> AffineMap:
        inv = linalg.inverse(self.linear)
        if inv is None:
            raise DomainError("affine map has singular linear part")
        shift = tuple(-linalg.dot(row, self.shift) for row in inv)
        return AffineMap(tuple(tuple(r) for r in inv), shift)


def pushforward(fr: Frame, a: AffineMap) -> Frame:
    """Pushforward (a_* X)(y) = L . X(a^{-1} y) computed exactly."""
    if a.n != fr.n:
        raise DomainError("affine map dimension does not match the frame")
    inv = a.inverse()
    n = fr.n
    subs = [
        Poly(n, {tuple(1 if m == j else 0 for m in range(n)): inv.linear[i][j]
                 for j in range(n) if inv.linear[i][j] != 0})
        + Poly.const(n, inv.shift[i])
        for i in range(n)
    ]
    new_fields = []
    for f in fr.fields:
        pulled = [c.compose(subs) for c in f.comps]
        comps = []
        for i in range(n):
            acc = Poly.zero(n)
            for j in range(n):
                if a.linear[i][j] != 0:
                    acc = acc + pulled[j] * a.linear[i][j]
            comps.append(acc)
        new_fields.append(PolyField(tuple(comps)))
    return Frame(n, tuple(new_fields))


def frame_change(fr: Frame, g) -> Frame:
    """Constant recombination fr . G: new field m is sum_j G[j][m] X_j."""
    k = fr.k
    rows = [[Fraction(x) for x in row] for row in g]
    if len(rows) != k or any(len(r) != k for r in rows):
        raise DomainError(f"change matrix must be {k}x{k}")
    if linalg.det(rows) == 0:
        raise DomainError("frame change matrix is singular")
    new_fields = []
    for m in range(k):
        acc = PolyField.zero(fr.n)
        for j in range(k):
            if rows[j][m] != 0:
                acc = acc + fr.fields[j].scale(rows[j][m])
        new_fields.append(acc)
    return Frame(fr.n, tuple(new_fields))

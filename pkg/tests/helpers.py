"""Shared helpers for the test suite."""

from __future__ import annotations

import itertools
from fractions import Fraction

from liegrowth.freelie import BracketExpr
from liegrowth.polyfields import Frame, Poly, PolyField


def F(a, b=1) -> Fraction:
    return Fraction(a, b)


def leaf(g) -> BracketExpr:
    return BracketExpr.leaf(g)


def pair(a, b) -> BracketExpr:
    return BracketExpr.pair(a, b)


def chain(*gens) -> BracketExpr:
    """Right-nested wrap [X_{g1}, [X_{g2}, [... X_{gl}]]]."""
    expr = leaf(gens[-1])
    for g in reversed(gens[:-1]):
        expr = pair(leaf(g), expr)
    return expr


def all_expressions(k: int, max_len: int) -> dict[int, list[BracketExpr]]:
    """Every bracket expression over k generators, grouped by length."""
    by_len = {1: [leaf(g) for g in range(1, k + 1)]}
    for ln in range(2, max_len + 1):
        acc = []
        for la in range(1, ln):
            for a in by_len[la]:
                for b in by_len[ln - la]:
                    acc.append(pair(a, b))
        by_len[ln] = acc
    return by_len


def rand_fraction(rng, span=6, den=3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_point(rng, n, span=3, den=3) -> tuple[Fraction, ...]:
    return tuple(rand_fraction(rng, span, den) for _ in range(n))


def constant_frame(n: int, k: int) -> Frame:
    """(d1, ..., dk) on R^n."""
    return Frame(n, tuple(PolyField.basis(n, j) for j in range(1, k + 1)))


def classical_chain_value(frame: Frame, index, point):
    """Iterated classical bracket with the leftmost-outermost nesting."""
    from liegrowth.polyfields import poly_lie_bracket

    cur = frame.fields[index[-1] - 1]
    for c in reversed(index[:-1]):
        cur = poly_lie_bracket(frame.fields[c - 1], cur)
    return cur.value_at(point)


def all_chains(k: int, max_len: int):
    for ln in range(1, max_len + 1):
        yield from itertools.product(range(1, k + 1), repeat=ln)

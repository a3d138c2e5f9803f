import random

import pytest

from liegrowth import linalg
from liegrowth.errors import DomainError
from liegrowth.polyfields import (
    AffineMap,
    Frame,
    Poly,
    PolyField,
    frame_change,
    poly_lie_bracket,
    pushforward,
)

from helpers import F, rand_fraction, rand_point


def test_poly_arithmetic():
    x1 = Poly.variable(2, 1)
    x2 = Poly.variable(2, 2)
    p = (x1 + x2) * (x1 - x2)
    assert p == x1 * x1 - x2 * x2
    assert (x1**3).eval_at((2, 0)) == 8
    assert Poly.const(2, F(1, 2)) * 4 == Poly.const(2, 2)
    assert (p - p).is_zero()


def test_poly_derivative():
    x1 = Poly.variable(2, 1)
    x2 = Poly.variable(2, 2)
    p = x1 * x1 * x2 + x2 * 3
    assert p.derivative(1) == 2 * x1 * x2
    assert p.derivative(2) == x1 * x1 + Poly.const(2, 3)
    assert Poly.const(2, 5).derivative(1).is_zero()


def test_poly_compose_affine_consistency():
    rng = random.Random(13)
    x1 = Poly.variable(2, 1)
    x2 = Poly.variable(2, 2)
    p = x1 * x1 + 2 * x1 * x2 - x2
    subs = [x1 - x2, x2 + Poly.const(2, 3)]
    q = p.compose(subs)
    for _ in range(10):
        pt = rand_point(rng, 2)
        expected = p.eval_at((subs[0].eval_at(pt), subs[1].eval_at(pt)))
        assert q.eval_at(pt) == expected


def test_poly_str_deterministic():
    x1 = Poly.variable(2, 1)
    x2 = Poly.variable(2, 2)
    p = x2 * x2 - x1 + Poly.const(2, F(1, 2))
    assert str(p) == "1/2 - x1 + x2^2"


def test_poly_power_domain():
    with pytest.raises(DomainError):
        Poly.variable(2, 1) ** -1
    with pytest.raises(DomainError):
        Poly.variable(2, 3)


def test_affine_map_inverse_round_trip():
    rng = random.Random(21)
    for _ in range(10):
        while True:
            lin = [[rand_fraction(rng, 3, 2) for _ in range(3)] for _ in range(3)]
            if linalg.det(lin) != 0:
                break
        amap = AffineMap.make(lin, [rand_fraction(rng, 3, 2) for _ in range(3)])
        inv = amap.inverse()
        p = rand_point(rng, 3)
        assert inv.apply(amap.apply(p)) == tuple(p)


def test_pushforward_bracket_naturality():
    # the classical bracket commutes with pushforward
    rng = random.Random(34)
    n = 3
    x1 = Poly.variable(n, 1)
    x2 = Poly.variable(n, 2)
    X = PolyField((Poly.const(n, 1), x1 * x2, x2))
    Y = PolyField((x2, Poly.const(n, 0), x1 * x1))
    fr = Frame(n, (X, Y))
    while True:
        lin = [[rand_fraction(rng, 2, 2) for _ in range(n)] for _ in range(n)]
        if linalg.det(lin) != 0:
            break
    amap = AffineMap.make(lin, [rand_fraction(rng, 2, 2) for _ in range(n)])
    moved = pushforward(fr, amap)
    lhs = poly_lie_bracket(moved.fields[0], moved.fields[1])
    rhs = pushforward(
        Frame(n, (poly_lie_bracket(X, Y),)), amap
    ).fields[0]
    assert lhs == rhs


def test_frame_change_requires_invertible():
    fr = Frame(2, (PolyField.basis(2, 1), PolyField.basis(2, 2)))
    with pytest.raises(DomainError):
        frame_change(fr, [[1, 2], [2, 4]])
    changed = frame_change(fr, [[0, 1], [1, 0]])
    assert changed.fields[0] == fr.fields[1]

"""Exact linear algebra and root finding over K."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from padic_hodge.linalg import RingOps, solve, kernel, det, charpoly
from padic_hodge.polyroots import (newton_root_valuations, find_k_roots,
                                   poly_eval)
from padic_hodge.errors import PrecisionError


def ops_for(field):
    return RingOps(field.zero, field.one)


def rand_matrix(field, rng, n, den=(1, 2, 5)):
    return [[field.coerce(Fraction(rng.randint(-30, 30), rng.choice(den)))
             for _ in range(n)] for _ in range(n)]


def det_fraction_oracle(rows):
    """Leibniz determinant over exact rationals."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        # parity by counting inversions
        inv = sum(1 for i in range(n) for j in range(i + 1, n)
                  if seen[i] > seen[j])
        sign = -1 if inv % 2 else 1
        prod = Fraction(1)
        for i in range(n):
            prod *= rows[i][perm[i]]
        total += sign * prod
    return total


def test_det_matches_leibniz_oracle(K5):
    rng = random.Random(21)
    ops = ops_for(K5)
    for n in (2, 3, 4):
        for _ in range(5):
            fracs = [[Fraction(rng.randint(-9, 9), rng.choice([1, 1, 5]))
                      for _ in range(n)] for _ in range(n)]
            mat = [[K5.coerce(x) for x in row] for row in fracs]
            got = det(mat, ops)
            expect = K5.coerce(det_fraction_oracle(fracs))
            assert (got - expect).is_zero


def test_solve_and_kernel(K5):
    rng = random.Random(22)
    ops = ops_for(K5)
    for _ in range(10):
        A = rand_matrix(K5, rng, 3)
        x_true = [K5.coerce(rng.randint(-5, 5)) for _ in range(3)]
        b = [sum((A[i][j] * x_true[j] for j in range(3)), K5.zero())
             for i in range(3)]
        x, resid = solve(A, b, ops)
        if x is None:
            continue  # singular draw
        for got, want in zip(x, x_true):
            assert (got - want).is_zero
    # an inconsistent system reports residual valuations
    A = [[K5.one(), K5.one()], [K5.one(), K5.one()]]
    b = [K5.zero(), K5.coerce(25)]
    x, resid = solve(A, b, ops)
    assert x is None and resid == [2]


def test_kernel_dimension(K5):
    ops = ops_for(K5)
    A = [[K5.one(), K5.coerce(2), K5.coerce(3)]]
    ker = kernel(A, ops)
    assert len(ker) == 2
    for v in ker:
        img = sum((A[0][j] * v[j] for j in range(3)), K5.zero())
        assert img.is_zero


def test_charpoly_companion(K5):
    # companion matrix of X^2 + 5 has exactly that characteristic polynomial
    ops = ops_for(K5)
    C = [[K5.zero(), K5.coerce(-5)], [K5.one(), K5.zero()]]
    cp = charpoly(C, ops)
    assert (cp[0] - K5.coerce(5)).is_zero
    assert cp[1].is_zero
    assert (cp[2] - K5.one()).is_zero


def test_guard_band_raises(K5):
    ops = RingOps(K5.zero, K5.one, guard=4)
    nearly = K5.coerce(5 ** 41)  # valuation 41 inside the 44-digit window
    with pytest.raises(PrecisionError):
        ops.classify(nearly)


def test_newton_polygon_examples(K5):
    # X^2 - X/5 + 1/5: root valuations {-1, 0}
    g = [K5.coerce(Fraction(1, 5)), K5.coerce(Fraction(-1, 5)), K5.one()]
    assert newton_root_valuations(g) == [Fraction(-1), Fraction(0)]
    # X^2 + 5: both roots of valuation 1/2
    g2 = [K5.coerce(5), K5.zero(), K5.one()]
    assert newton_root_valuations(g2) == [Fraction(1, 2), Fraction(1, 2)]


def test_newton_polygon_precision_guard(K5):
    # constant term indistinguishable from zero: not invertible at precision
    zero_const = K5.zero(6)
    g = [zero_const, K5.one(), K5.one()]
    with pytest.raises(PrecisionError):
        newton_root_valuations(g)


def test_find_roots_with_multiplicity(K5):
    # (X-2)^2 (X-10)
    g = [K5.coerce(-40), K5.coerce(44), K5.coerce(-14), K5.one()]
    roots, resid = find_k_roots(g, K5)
    assert len(resid) - 1 == 0
    by_mult = sorted((m, r.coords[0].lift_fraction()) for r, m in roots)
    assert by_mult[0][0] == 1 and by_mult[1][0] == 2
    for r, m in roots:
        assert poly_eval(g, r, K5).is_zero


def test_find_roots_none_for_irreducible(K5):
    g = [K5.coerce(5), K5.zero(), K5.one()]  # X^2 + 5
    roots, resid = find_k_roots(g, K5)
    assert not roots and len(resid) - 1 == 2


def test_find_roots_in_extension(K25):
    # split quadratic with roots t, t+1 in the residue-field lift
    t = K25.gen()
    a, b = t, t + K25.one()
    g = [a * b, -(a + b), K25.one()]
    roots, resid = find_k_roots(g, K25)
    assert len(roots) == 2 and len(resid) - 1 == 0
    for target in (a, b):
        assert any((r - target).is_zero for r, _ in roots)

import random

import numpy as np
import pytest

from branchmap.errors import Inconsistent
from branchmap.linalg import (ModMatrix, graded_piece_basis, intersect_row_spaces,
                              invert_matrix, minpoly_of_matrix, random_invertible,
                              reduce_rows_against)
from branchmap.unipoly import UniPoly


def test_nullspace_rank_one(ctx7):
    m = ModMatrix(ctx7, [[1, 1], [2, 2]])
    ns = m.nullspace()
    assert ns.rows == 1
    # spans the same line as (1, 6)
    v = ns.a[0]
    assert (v[0] + v[1]) % 7 == 0 and v.any()


def test_identity_has_trivial_nullspace(ctx7):
    assert ModMatrix.identity(ctx7, 5).nullspace().rows == 0


def test_constructed_rank(ctx):
    rng = random.Random(0)
    a = np.array([[rng.randrange(ctx.p) for _ in range(150)] for _ in range(200)])
    b = np.array([[rng.randrange(ctx.p) for _ in range(300)] for _ in range(150)])
    m = ModMatrix(ctx, a).mul(ModMatrix(ctx, b))
    assert m.rank() == 150


def test_rref_idempotent(ctx):
    rng = random.Random(1)
    for _ in range(10):
        m = ModMatrix(ctx, [[rng.randrange(ctx.p) for _ in range(8)] for _ in range(5)])
        r1, p1 = m.rref()
        r2, p2 = r1.rref()
        assert p1 == p2
        assert np.array_equal(r1.a, r2.a)


def test_nullspace_annihilates(ctx):
    rng = random.Random(2)
    for _ in range(10):
        m = ModMatrix(ctx, [[rng.randrange(ctx.p) for _ in range(9)] for _ in range(4)])
        ns = m.nullspace()
        assert ns.rows == 9 - m.rank()
        if ns.rows:
            prod = m.mul(ns.transpose())
            assert not prod.a.any()


def test_solve_and_inconsistent(ctx7):
    m = ModMatrix(ctx7, [[1, 2], [3, 4]])
    x = m.solve([5, 6])
    assert np.array_equal(m.mul_vec(x) % 7, np.array([5, 6]))
    bad = ModMatrix(ctx7, [[1, 1], [2, 2]])
    with pytest.raises(Inconsistent):
        bad.solve([1, 1])


def test_solve_batch(ctx):
    rng = random.Random(3)
    a = random_invertible(ctx, 6, rng)
    m = ModMatrix(ctx, a)
    rhs = np.array([[rng.randrange(ctx.p) for _ in range(4)] for _ in range(6)])
    x = m.solve_batch(rhs)
    assert np.array_equal(m.mul(ModMatrix(ctx, x)).a, rhs % ctx.p)


def test_invert_matrix(ctx):
    rng = random.Random(4)
    a = random_invertible(ctx, 5, rng)
    inv = invert_matrix(ctx, a)
    prod = ModMatrix(ctx, a).mul(ModMatrix(ctx, inv))
    assert np.array_equal(prod.a, np.eye(5, dtype=np.int64))


def test_graded_piece_two_vars(ctx):
    from branchmap.mpoly import PolyRing
    r2 = PolyRing(ctx, ("x", "y"))
    x, _y = r2.gens()
    piece = graded_piece_basis([x], 2)
    assert piece.rank() == 2  # x^2, x*y


def test_graded_piece_three_vars(ring_xyz):
    x, y, z = ring_xyz.gens()
    piece = graded_piece_basis([x, y * z], 2)
    assert piece.rank() == 4  # x^2, x*y, x*z, y*z


def test_graded_piece_multiplication_by_quadrics(ring_xyz):
    rng = random.Random(5)
    quintic = ring_xyz.random_form(5, rng)
    piece = graded_piece_basis([quintic], 7)
    assert piece.rank() == 6  # C(4, 2) quadric multipliers


def test_reduce_rows_against(ctx):
    rng = random.Random(6)
    m = ModMatrix(ctx, [[rng.randrange(ctx.p) for _ in range(7)] for _ in range(3)])
    rref, pivots = m.rref()
    basis = rref.a[: len(pivots)]
    combo = sum(int(rng.randrange(ctx.p)) * basis[i] for i in range(len(pivots)))
    red = reduce_rows_against(combo % ctx.p, basis, pivots, ctx.p)
    assert not red.any()


def test_minpoly_of_companion(ctx):
    # companion matrix of (x - 2)(x - 5)(x - 7)
    target = UniPoly.from_roots(ctx, [2, 5, 7])
    n = 3
    c = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n):
        c[i, i - 1] = 1
    for i in range(n):
        c[i, n - 1] = (-target.coeffs[i]) % ctx.p
    rng = random.Random(7)
    mp = minpoly_of_matrix(ctx, c, rng)
    assert mp == target


def test_intersect_row_spaces(ctx):
    a = ModMatrix(ctx, [[1, 0, 0, 0], [0, 1, 0, 0]])
    b = ModMatrix(ctx, [[0, 1, 0, 0], [0, 0, 1, 0]])
    cap = intersect_row_spaces(a, b)
    assert cap.rows == 1
    v = cap.a[0]
    assert v[1] % ctx.p and not v[0] and not v[2] and not v[3]

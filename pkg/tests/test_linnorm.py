import random

import numpy as np
import pytest

from branchmap.curves import PlaneCurve, singular_radical
from branchmap.errors import DimensionMismatch, NoAdjoint
from branchmap.groebner import Ideal, ideal_quotient
from branchmap.linalg import ModMatrix, graded_piece_basis
from branchmap.linnorm import (adjoint_element, image_quadrics,
                               linear_normalization, linear_syzygies,
                               quotient_graded_piece, radical_graded_piece,
                               verify_syzygy)
from branchmap.mpoly import format_poly


def span_of(forms, degree, ctx):
    rows = np.array([f.coeff_vector(degree) for f in forms], dtype=np.int64)
    return ModMatrix(ctx, rows)


def test_nodal_cubic_quotient_piece(nodal_cubic, ring_xyz, ctx):
    sd = singular_radical(nodal_cubic, seed=5)
    x = ring_xyz.var(0)
    piece = quotient_graded_piece(nodal_cubic, x, sd)
    got = {format_poly(h) for h in piece}
    assert got == {"x^2", "x*y", "x*z", "y*z"}


def test_nodal_cubic_quotient_matches_groebner_oracle(nodal_cubic, ring_xyz, ctx):
    sd = singular_radical(nodal_cubic, seed=5)
    x, y, _z = ring_xyz.gens()
    piece = quotient_graded_piece(nodal_cubic, x, sd)
    oracle = ideal_quotient(Ideal([x, nodal_cubic.form]), Ideal([x, y]))
    oracle_piece = graded_piece_basis(oracle.gens, 2)
    lhs = span_of(piece, 2, ctx)
    assert lhs.rank() == oracle_piece.rank() == 4
    assert lhs.stack(oracle_piece).rank() == 4


def test_nodal_cubic_normalization_is_twisted_cubic(nodal_cubic, ring_xyz):
    sd = singular_radical(nodal_cubic, seed=5)
    x = ring_xyz.var(0)
    pc = linear_normalization(nodal_cubic, sd, g=x)
    assert [format_poly(f) for f in pc.forms] == ["x^2", "x*y", "x*z", "y*z"]
    qs = image_quadrics(pc)
    assert qs.dim == 3
    amb = qs.quadrics[0].ring
    w0, w1, w2, w3 = amb.gens()
    expected = [w2 * w1 - w3 * w0,
                w3 ** 2 - w2 ** 2 - w0 * w2,
                w3 * w1 - w0 * w2 - w0 ** 2]
    got = span_of(qs.quadrics, 2, amb.ctx)
    want = span_of(expected, 2, amb.ctx)
    assert got.rank() == 3 and got.stack(want).rank() == 3
    # each twisted-cubic relation pulls back to an exact multiple of F
    for q in expected:
        pullback = q.substitute(pc.forms)
        assert pullback.is_zero() or nodal_cubic.form.divides(pullback)


def test_normalization_projects_to_base(nodal_cubic):
    from branchmap.curves import sample_points_on_curve
    sd = singular_radical(nodal_cubic, seed=5)
    pc = linear_normalization(nodal_cubic, sd, g=nodal_cubic.ring.var(0))
    rng = random.Random(2)
    pts = sample_points_on_curve(nodal_cubic, 12, rng,
                                 avoid_singular_of=sd.radical_gens)
    p = nodal_cubic.ring.p
    for q in pts:
        img = [f.evaluate(q) for f in pc.forms[:3]]
        # (x g : y g : z g) = (x : y : z) wherever g does not vanish
        scale = None
        for a, b in zip(img, q):
            if b % p:
                scale = a * pow(b, p - 2, p) % p
                break
        assert scale is not None and scale != 0
        assert all(a == scale * b % p for a, b in zip(img, q))


def test_adjoint_rejects_smooth_curve(ring_xyz):
    smooth = PlaneCurve(ring_xyz.parse("x^3 + y^3 + z^3"))
    sd = singular_radical(smooth, seed=1)
    with pytest.raises(NoAdjoint):
        adjoint_element(smooth, sd, seed=0)


def test_d2_adjoint_and_quotient_dims(forward_d2):
    _f, _r, b = forward_d2
    sd = singular_radical(b, seed=7)
    g, deg_g = adjoint_element(b, sd, seed=1)
    assert deg_g == 3
    assert len(radical_graded_piece(sd, 3)) == 1
    piece = quotient_graded_piece(b, g, sd)
    assert len(piece) == 6  # N + 1 for d = 2
    pc = linear_normalization(b, sd, g=g, expected_d=2)
    assert pc.ambient_dim == 5
    assert pc.form_degree == deg_g + 1


def test_d3_stage_dimensions(d3_normalized):
    b, sing, pc = d3_normalized
    assert pc.ambient_dim == 9
    qs = image_quadrics(pc)
    assert qs.dim == 28
    syz = linear_syzygies(qs)
    assert syz.dim == 105
    for row in (0, 17, 104):
        assert verify_syzygy(syz, qs, row)


def test_d3_radical_piece_dims(forward_d3):
    # the singular points of a degree-3 branching curve admit a single
    # degree-14 adjoint and a 10-dimensional degree-15 piece
    _f, _r, b = forward_d3
    sd = singular_radical(b, seed=3)
    assert len(radical_graded_piece(sd, 14)) == 1
    assert len(radical_graded_piece(sd, 15)) == 10


def test_d3_quotient_piece_any_adjoint(d3_normalized):
    b, sing, pc = d3_normalized
    assert len(pc.forms) == 10
    deg = pc.form_degree
    assert deg == pc.adjoint.degree() + 1
    x, y, z = b.ring.gens()
    g = pc.adjoint
    assert [format_poly(f) for f in pc.forms[:3]] == \
        [format_poly(x * g), format_poly(y * g), format_poly(z * g)]


def test_image_quadrics_pull_back_to_multiples(d3_normalized):
    b, _sing, pc = d3_normalized
    qs = image_quadrics(pc)
    rng = random.Random(3)
    for q in rng.sample(qs.quadrics, 4):
        pullback = q.substitute(pc.forms)
        assert pullback.is_zero() or b.form.divides(pullback)


def test_expected_dimension_mismatch(forward_d2):
    _f, _r, b = forward_d2
    sd = singular_radical(b, seed=7)
    g, _ = adjoint_element(b, sd, seed=1)
    with pytest.raises(DimensionMismatch):
        linear_normalization(b, sd, g=g, expected_d=3)


def test_koszul_syzygy_example(ctx):
    from branchmap.linnorm import QuadricSpace
    from branchmap.mpoly import PolyRing
    r2 = PolyRing(ctx, ("x", "y"))
    x, y = r2.gens()
    qs = QuadricSpace(2, [x ** 2, x * y])
    syz = linear_syzygies(qs)
    assert syz.dim == 1
    assert verify_syzygy(syz, qs, 0)
    lone = QuadricSpace(2, [x ** 2 + y ** 2])
    assert linear_syzygies(lone).dim == 0

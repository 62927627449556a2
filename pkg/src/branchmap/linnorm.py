"""Linear normalization of a nodal/cuspidal plane curve, presented by forms.

The quotient ideal behind the construction is never computed in full: only
the single graded piece the construction consumes, as one nullspace
problem.  The normalization itself is carried as a parametrized
presentation (base curve plus forms); every downstream question is
answered through pullback linear algebra.
"""

import random

import numpy as np

from .errors import DimensionMismatch, NoAdjoint
from .linalg import ModMatrix, graded_piece_basis, reduce_rows_against, rref_array
from .mpoly import (PolyRing, monomial_index, monomials_of_degree,
                    poly_from_vector)


class ParamCurve:
    """The normalized curve: plane model plus the defining forms, the first
    three being x*g, y*g, z*g for the chosen adjoint element g."""

    __slots__ = ("base", "forms", "adjoint")

    def __init__(self, base, forms, adjoint):
        self.base = base
        self.forms = list(forms)
        self.adjoint = adjoint

    @property
    def ring(self):
        return self.base.ring

    @property
    def ambient_dim(self):
        return len(self.forms) - 1

    @property
    def form_degree(self):
        return self.forms[0].degree()

    def __repr__(self):
        return f"ParamCurve(N={self.ambient_dim}, form degree {self.form_degree})"


class QuadricSpace:
    __slots__ = ("n_ambient", "quadrics", "source")

    def __init__(self, n_ambient, quadrics, source=None):
        self.n_ambient = n_ambient
        self.quadrics = list(quadrics)
        self.source = source

    @property
    def dim(self):
        return len(self.quadrics)

    def __repr__(self):
        return f"QuadricSpace(dim {self.dim} in {self.n_ambient} vars)"


class LinearSyzygySpace:
    __slots__ = ("basis", "n_quadrics", "n_ambient")

    def __init__(self, basis, n_quadrics, n_ambient):
        self.basis = basis  # array (dim, n_quadrics * n_ambient)
        self.n_quadrics = n_quadrics
        self.n_ambient = n_ambient

    @property
    def dim(self):
        return self.basis.shape[0]

    def __repr__(self):
        return f"LinearSyzygySpace(dim {self.dim} on {self.n_quadrics} quadrics)"


def adjoint_element(curve, sing, seed=0, degree=None):
    """Random element of the minimal-degree nonzero graded piece of the
    singular-locus radical (or of the requested degree)."""
    if not sing.radical_gens:
        raise NoAdjoint("curve is smooth; the radical has no proper piece")
    rng = random.Random(seed)
    if degree is None:
        degree = sing.min_degree()
    if degree >= curve.degree:
        raise NoAdjoint(f"no adjoint element below degree {curve.degree}")
    basis = radical_graded_piece(sing, degree)
    if not basis:
        raise NoAdjoint(f"radical has no elements of degree {degree}")
    while True:
        g = curve.ring.zero()
        for b in basis:
            g = g + b.scale(rng.randrange(curve.ring.p))
        if not g.is_zero():
            return g, degree


def radical_graded_piece(sing, degree):
    """Basis of the degree piece of the radical, from its generating set."""
    gens = [g for g in sing.radical_gens if g.degree() <= degree]
    if not gens:
        return []
    piece = graded_piece_basis(gens, degree)
    basis = piece.row_space_basis()
    ring = sing.curve.ring
    return [poly_from_vector(ring, basis.a[i], degree) for i in range(basis.rows)]


def quotient_graded_piece(curve, g, sing):
    """Forms h of degree deg(g)+1 with h * (radical generators) inside
    <g, F>, as one chain of nullspace problems over the monomial basis."""
    ring = curve.ring
    ctx = ring.ctx
    p = ring.p
    F = curve.form
    deg_h = g.degree() + 1
    h_mons = monomials_of_degree(3, deg_h)
    # current solution space for h, as rows of coefficient vectors
    h_space = np.eye(len(h_mons), dtype=np.int64)
    for gen in sing.radical_gens:
        if h_space.shape[0] == 0:
            break
        if _in_span_of_two(gen, g, F):
            continue
        deg_rel = deg_h + gen.degree()
        target = _pair_span(g, F, deg_rel)
        rows, pivots = target
        idx = monomial_index(3, deg_rel)
        prods = np.zeros((h_space.shape[0], len(idx)), dtype=np.int64)
        ring_from_vec = [poly_from_vector(ring, h_space[i], deg_h)
                         for i in range(h_space.shape[0])]
        for r, hb in enumerate(ring_from_vec):
            prod = hb * gen
            for e, c in prod.terms.items():
                prods[r, idx[e]] = c
        residual = reduce_rows_against(prods, rows, pivots, p)
        kernel = ModMatrix(ctx, residual.T).nullspace()
        from .linalg import _matmul_mod
        h_space = _matmul_mod(kernel.a, h_space, p)
    basis, pivots = rref_array(h_space, p)
    basis = basis[: len(pivots)]
    return [poly_from_vector(ring, basis[i], deg_h) for i in range(basis.shape[0])]


def _pair_span(g, F, degree):
    """RREF rows and pivots of the degree piece of <g, F>."""
    span = graded_piece_basis([g, F], degree)
    reduced, pivots = span.rref()
    return reduced.a[: len(pivots)], pivots


def _in_span_of_two(gen, g, F):
    if gen.degree() < min(g.degree(), F.degree()):
        return False
    span = graded_piece_basis([h for h in (g, F) if h.degree() <= gen.degree()],
                              gen.degree())
    rows, pivots = span.rref()
    vec = gen.coeff_vector(gen.degree())
    residual = reduce_rows_against(vec, rows.a[: len(pivots)], pivots, g.ring.p)
    return not residual.any()


def linear_normalization(curve, sing, seed=0, g=None, expected_d=None):
    """Forms (x*g, y*g, z*g, h_1, ..., h_k) spanning the distinguished
    graded piece; basis completion by deterministic pivoting."""
    ring = curve.ring
    p = ring.p
    if g is None:
        g, _ = adjoint_element(curve, sing, seed)
    piece = quotient_graded_piece(curve, g, sing)
    if not piece:
        raise DimensionMismatch("quotient piece is empty")
    deg_h = g.degree() + 1
    x, y, z = ring.gens()
    first = [x * g, y * g, z * g]
    idx = monomial_index(3, deg_h)
    first_rows = np.array([f.coeff_vector(deg_h) for f in first], dtype=np.int64)
    fr, fp = rref_array(first_rows.copy(), p)
    if len(fp) != 3:
        raise DimensionMismatch("x*g, y*g, z*g are dependent")
    piece_rows = np.array([h.coeff_vector(deg_h) for h in piece], dtype=np.int64)
    residual = reduce_rows_against(piece_rows, fr[:3], fp, p)
    comp, comp_pivots = rref_array(residual, p)
    extras = [poly_from_vector(ring, comp[i], deg_h) for i in range(len(comp_pivots))]
    forms = first + extras
    n_ambient = len(forms) - 1
    if expected_d is not None and n_ambient != expected_d * (expected_d + 3) // 2:
        raise DimensionMismatch(
            f"normalization lands in P^{n_ambient}, expected "
            f"P^{expected_d * (expected_d + 3) // 2}")
    span = ModMatrix(ring.ctx, np.array([f.coeff_vector(deg_h) for f in forms],
                                        dtype=np.int64))
    if span.rank() != len(forms):
        raise DimensionMismatch("normalization forms are linearly dependent")
    return ParamCurve(curve, forms, g)


def ambient_ring(pc, prefix="w"):
    names = tuple(f"{prefix}{i}" for i in range(len(pc.forms)))
    return PolyRing(pc.ring.ctx, names)


def image_quadrics(pc):
    """All quadratic forms in the ambient variables whose pullback through
    the forms is an exact multiple of the base equation."""
    ring = pc.ring
    ctx = ring.ctx
    p = ring.p
    F = pc.base.form
    n = len(pc.forms)
    deg_rel = 2 * pc.form_degree
    idx = monomial_index(3, deg_rel)
    f_span = graded_piece_basis([F], deg_rel)
    f_rows, f_pivots = f_span.rref()
    f_rows = f_rows.a[: len(f_pivots)]
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    prods = np.zeros((len(pairs), len(idx)), dtype=np.int64)
    for r, (i, j) in enumerate(pairs):
        prod = pc.forms[i] * pc.forms[j]
        for e, c in prod.terms.items():
            prods[r, idx[e]] = c
    residual = reduce_rows_against(prods, f_rows, f_pivots, p)
    kernel = ModMatrix(ctx, residual.T).nullspace()
    amb = ambient_ring(pc)
    quadrics = []
    for row in kernel.a:
        terms = {}
        for r, (i, j) in enumerate(pairs):
            c = int(row[r])
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
        quadrics.append(amb.from_terms(terms))
    return QuadricSpace(n, quadrics, source=pc)


def linear_syzygies(qs):
    """Tuples of linear forms (L_1, ..., L_m) with sum L_i Q_i = 0, via one
    nullspace over cubic coefficients; no Groebner syzygy computation."""
    n = qs.n_ambient
    m = qs.dim
    if m == 0:
        return LinearSyzygySpace(np.zeros((0, 0), dtype=np.int64), 0, n)
    ring = qs.quadrics[0].ring
    ctx = ring.ctx
    cubics = monomial_index(n, 3)
    cols = np.zeros((m * n, len(cubics)), dtype=np.int64)
    for qi, q in enumerate(qs.quadrics):
        for v in range(n):
            row = np.zeros(len(cubics), dtype=np.int64)
            for e, c in q.terms.items():
                e2 = list(e)
                e2[v] += 1
                row[cubics[tuple(e2)]] = c
            cols[qi * n + v] = row
    kernel = ModMatrix(ctx, cols.T).nullspace()
    return LinearSyzygySpace(kernel.a, m, n)


def verify_syzygy(syz, qs, row_index):
    """Exact polynomial identity sum L_i Q_i = 0 for one basis row."""
    ring = qs.quadrics[0].ring
    n = syz.n_ambient
    row = syz.basis[row_index]
    acc = ring.zero()
    for qi, q in enumerate(qs.quadrics):
        lin = ring.from_terms({tuple(1 if k == v else 0 for k in range(n)): int(row[qi * n + v])
                               for v in range(n)})
        acc = acc + lin * q
    return acc.is_zero()

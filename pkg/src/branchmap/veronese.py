"""Recovery of the unique Veronese surface containing the normalized curve:
the syzygy-row construction for degree 3, the full quadric space for
degree >= 4, and checks on the consequences of uniqueness.
"""

import numpy as np

from .errors import NotABranchingCurve
from .linalg import ModMatrix, rref_array
from .mpoly import monomial_index, monomials_of_degree


def expected_quadric_count(d):
    """Quadrics cutting the degree-d Veronese surface in P^(d(d+3)/2)."""
    n = d * (d + 3) // 2 + 1
    return n * (n + 1) // 2 - (2 * d + 2) * (2 * d + 1) // 2


class VeroneseIdeal:
    __slots__ = ("n_ambient", "quadrics", "d")

    def __init__(self, n_ambient, quadrics, d):
        self.n_ambient = n_ambient
        self.quadrics = list(quadrics)
        self.d = d

    @property
    def dim(self):
        return len(self.quadrics)

    @property
    def ring(self):
        return self.quadrics[0].ring

    def __repr__(self):
        return f"VeroneseIdeal(d={self.d}, {self.dim} quadrics in {self.n_ambient} vars)"


def veronese_from_syzygies(qs, syz):
    """Degree-3 construction: split the linear-form syzygy matrix into
    scalar slices, stack their rows, and demand a 27-dimensional row space;
    its vectors recombine the 28 quadrics into the surface ideal."""
    dims = {"quadrics": qs.dim, "syzygies": syz.dim}
    if qs.dim != 28 or syz.dim != 105:
        raise NotABranchingCurve(
            f"degree-3 input dimensions off: {dims}", dims=dims)
    n = qs.n_ambient
    m = qs.dim
    p = qs.quadrics[0].ring.p
    stacked = np.zeros((syz.dim * n, m), dtype=np.int64)
    for r in range(syz.dim):
        row = syz.basis[r]
        for v in range(n):
            stacked[r * n + v] = row[v::n]
    reduced, pivots = rref_array(stacked, p)
    dims["row_space"] = len(pivots)
    if len(pivots) != 27:
        raise NotABranchingCurve(
            f"syzygy row space has dimension {len(pivots)}, want 27", dims=dims)
    basis = reduced[: len(pivots)]
    ring = qs.quadrics[0].ring
    quadrics = []
    for row in basis:
        q = ring.zero()
        for c, quad in zip(row, qs.quadrics):
            if c:
                q = q + quad.scale(int(c))
        quadrics.append(q)
    return VeroneseIdeal(n, quadrics, 3)


def veronese_from_quadrics(qs, d):
    """Degree >= 4: every quadric through the curve lies on the surface."""
    want = expected_quadric_count(d)
    if qs.dim != want:
        raise NotABranchingCurve(
            f"quadric space has dimension {qs.dim}, want {want} for d={d}",
            dims={"quadrics": qs.dim, "expected": want})
    return VeroneseIdeal(qs.n_ambient, list(qs.quadrics), d)


def verify_veronese(v, sample_point=None):
    """Consequence checks: the quadric count, the cubic-piece dimension of
    the generated ideal, and smoothness at a sample point."""
    d = v.d
    n = v.n_ambient
    if v.dim != expected_quadric_count(d):
        return False
    ring = v.ring
    p = ring.p
    cubics = monomial_index(n, 3)
    rows = np.zeros((n * v.dim, len(cubics)), dtype=np.int64)
    r = 0
    for q in v.quadrics:
        for var in range(n):
            for e, c in q.terms.items():
                e2 = list(e)
                e2[var] += 1
                rows[r, cubics[tuple(e2)]] = c
            r += 1
    rank = ModMatrix(ring.ctx, rows).rank()
    want = (len(cubics)
            - (3 * d + 2) * (3 * d + 1) // 2)
    if rank != want:
        return False
    if sample_point is not None:
        if any(q.evaluate(sample_point) != 0 for q in v.quadrics):
            return False
        # N+1 homogeneous coordinates, smooth surface point: rank N-2
        if jacobian_rank_at(v, sample_point) != n - 3:
            return False
    return True


def jacobian_rank_at(v, point):
    ring = v.ring
    p = ring.p
    rows = np.zeros((v.dim, v.n_ambient), dtype=np.int64)
    for r, q in enumerate(v.quadrics):
        for var in range(v.n_ambient):
            rows[r, var] = q.derivative(var).evaluate(point)
    return ModMatrix(ring.ctx, rows).rank()


def standard_veronese_forms(source_ring, d, ambient_ring=None):
    """The monomial Veronese map of degree d: all degree-d monomials."""
    from .mpoly import PolyRing
    mons = monomials_of_degree(3, d)
    if ambient_ring is None:
        ambient_ring = PolyRing(source_ring.ctx,
                                tuple(f"w{i}" for i in range(len(mons))))
    return [source_ring.monomial(m) for m in mons], ambient_ring


def standard_veronese_ideal(source_ring, d):
    """Quadrics of the monomial Veronese surface, as a kernel computation:
    quadratic forms whose pullback along the monomial map vanishes."""
    forms, amb = standard_veronese_forms(source_ring, d)
    n = len(forms)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    idx = monomial_index(3, 2 * d)
    rows = np.zeros((len(pairs), len(idx)), dtype=np.int64)
    for r, (i, j) in enumerate(pairs):
        prod = forms[i] * forms[j]
        for e, c in prod.terms.items():
            rows[r, idx[e]] = c
    kernel = ModMatrix(source_ring.ctx, rows.T.copy()).nullspace()
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
    return VeroneseIdeal(n, quadrics, d)

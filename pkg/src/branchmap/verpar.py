"""Points on the Veronese surface over F_p, osculating spaces via local
jets, the 3-dimensional projection system, and reconstruction of the final
planar map by sample interpolation.

Only rational points are used; extension-field intersection points are
discarded and the slice is redrawn.  The projection is never inverted
symbolically: the map is interpolated from (projection, first-three-
coordinates) sample pairs in one nullspace.
"""

import random

import numpy as np

from .errors import (DegenerateConfiguration, Inconsistent, InterpolationDefect,
                     NotZeroDimensional, PointSearchExhausted, SingularPoint)
from .groebner import AffineZeroDim, _points_from_mult_matrix
from .linalg import (ModMatrix, intersect_row_spaces, random_invertible,
                     rref_array)
from .mpoly import PolyRing, monomials_of_degree


class SurfacePoint:
    __slots__ = ("coords",)

    def __init__(self, coords, quadrics=None):
        self.coords = tuple(int(c) for c in coords)
        if quadrics is not None:
            if any(q.evaluate(self.coords) != 0 for q in quadrics):
                raise ValueError("point does not lie on the surface")

    def __eq__(self, other):
        return isinstance(other, SurfacePoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"SurfacePoint{self.coords}"


def _normalize_proj(vec, p):
    for k in range(len(vec) - 1, -1, -1):
        if vec[k] % p:
            inv = pow(int(vec[k]) % p, p - 2, p)
            return tuple(int(x) * inv % p for x in vec)
    return None


def quadric_matrix(q, n, p):
    """Symmetric matrix M with Q(x) = x^T M x (p odd)."""
    m = np.zeros((n, n), dtype=np.int64)
    half = pow(2, p - 2, p)
    for e, c in q.terms.items():
        idx = [i for i, x in enumerate(e) for _ in range(x)]
        i, j = idx[0], idx[1]
        if i == j:
            m[i, i] = c % p
        else:
            m[i, j] = (m[i, j] + c * half) % p
            m[j, i] = m[i, j]
    return m


class SliceSolver:
    """Intersects the surface with random codimension-2 linear subspaces
    and extracts all rational intersection points."""

    def __init__(self, v, seed):
        self.v = v
        self.rng = random.Random(seed)
        self.p = v.ring.p
        self.ctx = v.ring.ctx
        self.n = v.n_ambient
        self.matrices = [quadric_matrix(q, self.n, self.p) for q in v.quadrics]
        self.draws = 0
        self.rational_found = 0
        self.totals = []

    def draw_slice(self, chart_tries=4):
        """One random slice; returns (rational SurfacePoints, total_degree)."""
        p, n = self.p, self.n
        rng = self.rng
        while True:
            self.draws += 1
            lf = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(2)],
                          dtype=np.int64)
            rr, pivots = rref_array(lf.copy(), p)
            if len(pivots) != 2:
                continue
            free = [j for j in range(n) if j not in pivots]
            embed = np.zeros((n, n - 2), dtype=np.int64)
            for k, j in enumerate(free):
                embed[j, k] = 1
                for r, pc in enumerate(pivots):
                    embed[pc, k] = (-int(rr[r, j])) % p
            restricted = [(embed.T @ (m @ embed % p)) % p for m in self.matrices]
            result = self._solve_restricted(restricted, embed, chart_tries)
            if result is None:
                continue
            pts, total = result
            self.totals.append(total)
            self.rational_found += len(pts)
            return pts, total

    def _solve_restricted(self, restricted, embed, chart_tries):
        """Projective solve of the restricted quadric system in n-2
        homogeneous coordinates via a random affine chart."""
        p = self.p
        m = self.n - 2
        expected = self.v.d * self.v.d
        for _ in range(chart_tries):
            chart = random_invertible(self.ctx, m, self.rng)
            ring = PolyRing(self.ctx, tuple(f"c{i}" for i in range(m - 1)))
            gens = []
            for mat in restricted:
                mm = (chart.T @ (mat @ chart % p)) % p
                gens.append(_affinize_quadric(ring, mm))
            gens = [g for g in gens if not g.is_zero()]
            if not gens:
                return None
            try:
                azd = AffineZeroDim(gens, bound=3, stability=False)
            except NotZeroDimensional:
                continue
            total = azd.dimension
            if total != expected:
                continue
            pts = self._extract_points(azd, gens)
            if pts is None:
                continue
            out = []
            for q in pts:
                affine = np.array(list(q) + [1], dtype=np.int64)
                amb = embed @ (chart @ affine % p) % p
                norm = _normalize_proj(amb, p)
                if norm is None:
                    continue
                if all(quad.evaluate(norm) == 0 for quad in self.v.quadrics):
                    out.append(SurfacePoint(norm))
            return out, total
        return None

    def _extract_points(self, azd, gens):
        var_vecs = azd.variable_nf_vectors()
        one_vec = azd.one_vector()
        for _ in range(6):
            coeffs = [self.rng.randrange(self.p) for _ in range(azd.ring.nvars)]
            mult = azd.mult_matrix_linear(coeffs)
            pts = _points_from_mult_matrix(self.ctx, mult, var_vecs, one_vec, self.rng)
            if pts is not None:
                return [q for q in pts if all(g.evaluate(q) == 0 for g in gens)]
        return None


def _affinize_quadric(ring, mat):
    """Quadric given by a symmetric matrix on m homogeneous coordinates,
    affinized by setting the last coordinate to 1."""
    m = mat.shape[0]
    p = ring.p
    terms = {}
    for i in range(m):
        for j in range(i, m):
            c = int(mat[i, j]) if i == j else (2 * int(mat[i, j])) % p
            if not c:
                continue
            e = [0] * (m - 1)
            if i < m - 1:
                e[i] += 1
            if j < m - 1:
                e[j] += 1
            key = tuple(e)
            terms[key] = (terms.get(key, 0) + c) % p
    return ring.from_terms(terms)


def find_point(v, seed=0, max_tries=200, solver=None):
    """A rational point of the surface, by random codimension-2 slicing."""
    s = solver or SliceSolver(v, seed)
    for _ in range(max_tries):
        pts, _total = s.draw_slice()
        if pts:
            return pts[0]
    raise PointSearchExhausted(f"no rational point in {max_tries} slices")


class JetChart:
    """Truncated power-series parametrization of the surface at a smooth
    point: for each ambient coordinate a bivariate series in the two local
    parameters, exact through the requested total degree."""

    __slots__ = ("point", "pivot", "order", "series", "ring")

    def __init__(self, point, pivot, order, series, ring):
        self.point = point
        self.pivot = pivot
        self.order = order
        self.series = series  # list of dicts {(i, j): coeff}
        self.ring = ring


def jet_expand(v, y, order):
    """Solve for the surface as a graph over its tangent plane at y,
    degree by degree; the linear blocks are invertible by smoothness."""
    ring = v.ring
    ctx = ring.ctx
    p = ring.p
    n = v.n_ambient
    coords = y.coords
    pivot = max(i for i in range(n) if coords[i] % p)
    inv = pow(coords[pivot], p - 2, p)
    affine = [c * inv % p for c in coords]
    others = [i for i in range(n) if i != pivot]
    a = np.array([affine[i] for i in others], dtype=np.int64)
    # affine quadrics: z^T A z + b^T z + c on the chart coordinates
    quads = []
    for q in v.quadrics:
        m = quadric_matrix(q, n, p)
        sub = m[np.ix_(others, others)] % p
        b = (2 * m[pivot, others]) % p
        quads.append((sub, b))
    # shift to y: linear part L = 2 A a + b
    lin = np.zeros((len(quads), n - 1), dtype=np.int64)
    for r, (sub, b) in enumerate(quads):
        lin[r] = (2 * (sub @ a) + b) % p
    # n coords, chart has n-1, the surface is 2-dimensional: rank n-3
    lr, lp = rref_array(lin.copy(), p)
    if len(lp) != n - 3:
        raise SingularPoint(f"quadric Jacobian rank {len(lp)} != {n - 3}")
    pivot_cols = list(lp)
    free_cols = [j for j in range(n - 1) if j not in set(lp)]
    if len(free_cols) != 2:
        raise SingularPoint("tangent space is not two-dimensional")
    a_sys = ModMatrix(ctx, lin[:, pivot_cols])
    # series for the chart coordinates; free coords are the parameters
    series = [dict() for _ in range(n - 1)]
    for k, j in enumerate(free_cols):
        series[j][(1, 0) if k == 0 else (0, 1)] = 1
    # linear part of the graph: solve A_sys * x = -(lin restricted to free)
    rhs0 = (-lin[:, free_cols]) % p
    x0 = a_sys.solve_batch(rhs0)
    for r, c in enumerate(pivot_cols):
        if x0[r, 0] % p:
            series[c][(1, 0)] = int(x0[r, 0]) % p
        if x0[r, 1] % p:
            series[c][(0, 1)] = int(x0[r, 1]) % p
    for e in range(2, order + 1):
        mons = [(e - k, k) for k in range(e + 1)]
        rhs = np.zeros((len(quads), len(mons)), dtype=np.int64)
        for r, (sub, _b) in enumerate(quads):
            conv = _series_quadratic_part(series, sub, e, p)
            for cidx, mon in enumerate(mons):
                rhs[r, cidx] = (-conv.get(mon, 0)) % p
        try:
            sol = a_sys.solve_batch(rhs)
        except Inconsistent as exc:
            raise SingularPoint(f"jet system inconsistent at order {e}") from exc
        for r, c in enumerate(pivot_cols):
            for cidx, mon in enumerate(mons):
                val = int(sol[r, cidx]) % p
                if val:
                    series[c][mon] = val
    # assemble ambient series: chart coordinate = shifted series + base point
    full = []
    for i in range(n):
        if i == pivot:
            full.append({(0, 0): 1})
            continue
        j = others.index(i)
        s = dict(series[j])
        base = int(a[j]) % p
        if base:
            s[(0, 0)] = base
        full.append(s)
    chart = JetChart(y, pivot, order, full, ring)
    _verify_jet(v, chart)
    return chart


def _series_quadratic_part(series, sub, e, p):
    """Coefficients of total degree e in z^T sub z for the current series
    (which has no constant term)."""
    n = len(series)
    out = {}
    rows, cols = np.nonzero(sub)
    for i, j in zip(rows, cols):
        c = int(sub[i, j])
        for m1, c1 in series[i].items():
            d1 = m1[0] + m1[1]
            if d1 >= e:
                continue
            for m2, c2 in series[j].items():
                if d1 + m2[0] + m2[1] != e:
                    continue
                mon = (m1[0] + m2[0], m1[1] + m2[1])
                out[mon] = (out.get(mon, 0) + c * c1 * c2) % p
    return out


def _verify_jet(v, chart):
    p = chart.ring.p
    n = v.n_ambient
    for q in v.quadrics:
        m = quadric_matrix(q, n, p)
        acc = {}
        rows, cols = np.nonzero(m)
        for i, j in zip(rows, cols):
            c = int(m[i, j])
            for m1, c1 in chart.series[i].items():
                for m2, c2 in chart.series[j].items():
                    if m1[0] + m1[1] + m2[0] + m2[1] > chart.order:
                        continue
                    mon = (m1[0] + m2[0], m1[1] + m2[1])
                    acc[mon] = (acc.get(mon, 0) + c * c1 * c2) % p
        if any(val % p for val in acc.values()):
            raise SingularPoint("jet fails to annihilate a surface quadric")


class OsculatingSpace:
    __slots__ = ("k", "basis")

    def __init__(self, k, basis):
        self.k = k
        self.basis = basis  # ModMatrix rows = linear form coefficient vectors

    @property
    def dim(self):
        return self.basis.rows

    def __repr__(self):
        return f"OsculatingSpace(k={self.k}, dim={self.dim})"


def osculating_space(chart, k):
    """Linear forms whose restriction to the surface vanishes to order at
    least k at the chart point."""
    ring = chart.ring
    p = ring.p
    n = len(chart.series)
    mons = [(i, j) for d in range(k) for i, j in
            [(d - t, t) for t in range(d + 1)]]
    rows = np.zeros((len(mons), n), dtype=np.int64)
    for r, mon in enumerate(mons):
        for i in range(n):
            rows[r, i] = chart.series[i].get(mon, 0)
    kernel = ModMatrix(ring.ctx, rows).nullspace()
    return OsculatingSpace(k, kernel)


def projection_system(v, chart1, chart2):
    """Basis of J = (O_{y1,d} ∩ O_{y2,d-1}) + (O_{y1,d-1} ∩ O_{y2,d});
    must be 3-dimensional."""
    d = v.d
    o1d = osculating_space(chart1, d)
    o1dm = osculating_space(chart1, d - 1)
    o2d = osculating_space(chart2, d)
    o2dm = osculating_space(chart2, d - 1)
    s1 = intersect_row_spaces(o1d.basis, o2dm.basis)
    s2 = intersect_row_spaces(o1dm.basis, o2d.basis)
    joined = s1.stack(s2).row_space_basis()
    if joined.rows != 3:
        raise DegenerateConfiguration(
            f"projection system has dimension {joined.rows}, want 3 "
            f"(summands {s1.rows}, {s2.rows})")
    ring = v.ring
    n = v.n_ambient
    forms = []
    for r in range(3):
        forms.append(ring.from_terms(
            {tuple(1 if i == k else 0 for i in range(n)): int(joined.a[r, k])
             for k in range(n)}))
    return forms


def interpolate_map(pc, v, pi, samples, d, source_names=("s", "t", "u"),
                    holdout=0):
    """The unique degree-d triple in the projection coordinates matching
    the first three ambient coordinates on every sample, as one nullspace.

    Returns (forms, holdout_samples).  Raises InterpolationDefect when the
    nullity is not 1.
    """
    ring = v.ring
    ctx = ring.ctx
    p = ring.p
    src = PolyRing(ctx, source_names)
    mons = monomials_of_degree(3, d)
    nm = len(mons)
    seen = set()
    rows = []
    used = []
    images = set()
    for pt in samples:
        if pt.coords in seen:
            continue
        seen.add(pt.coords)
        q = tuple(f.evaluate(pt.coords) for f in pi)
        qn = _normalize_proj(q, p)
        if qn is None:
            continue
        w = pt.coords[:3]
        if all(x % p == 0 for x in w):
            continue
        images.add(qn)
        used.append(pt)
    if len(images) < (98 * len(used)) // 100:
        raise DegenerateConfiguration("projection collides on sampled points")
    kept = used[: len(used) - holdout] if holdout else used
    held = used[len(used) - holdout:] if holdout else []
    for pt in kept:
        q = tuple(f.evaluate(pt.coords) for f in pi)
        w = pt.coords[:3]
        mvals = [1] * nm
        for c, mon in enumerate(mons):
            mvals[c] = pow(q[0], mon[0], p) * pow(q[1], mon[1], p) % p \
                * pow(q[2], mon[2], p) % p
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            row = np.zeros(3 * nm, dtype=np.int64)
            for c in range(nm):
                row[i * nm + c] = w[j] * mvals[c] % p
                row[j * nm + c] = (-w[i] * mvals[c]) % p
            rows.append(row)
    kernel = ModMatrix(ctx, np.array(rows, dtype=np.int64)).nullspace()
    if kernel.rows != 1:
        raise InterpolationDefect(
            f"interpolation nullity {kernel.rows}, want 1 "
            f"({len(kept)} samples)")
    vec = kernel.a[0]
    forms = []
    for i in range(3):
        forms.append(src.from_terms({mon: int(vec[i * nm + c])
                                     for c, mon in enumerate(mons)}))
    if any(f.is_zero() for f in forms):
        raise InterpolationDefect("interpolated map has a zero component")
    return forms, held


def check_sample_conditions(forms, pi, samples, p):
    """Exact cross-product conditions on held-out samples."""
    for pt in samples:
        q = tuple(f.evaluate(pt.coords) for f in pi)
        w = pt.coords[:3]
        vals = tuple(f.evaluate(q) for f in forms)
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            if (vals[i] * w[j] - vals[j] * w[i]) % p:
                return False
    return True

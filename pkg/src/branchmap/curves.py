"""Plane-curve utilities: ramification determinants, Hessians, the radical
of the singular locus of a nodal/cuspidal curve, dual curves, and
smoothness/genericity certificates.

The singular-locus radical is computed without any Groebner basis: a
degree-bounded row reduction of the shifted Jacobian generators yields the
quotient algebra, the nilpotent part is split off by evaluating the
squarefree eliminant at the multiplication matrix, and the homogeneous
radical is rebuilt from point-vanishing conditions degree by degree.
"""

import random

import numpy as np

from .errors import (ChartFailure, NotGeneric, NotPrincipal,
                     NotZeroDimensional, ShapeFailure)
from .groebner import AffineZeroDim
from .linalg import (ModMatrix, _matmul_mod, graded_piece_basis, invert_matrix,
                     minpoly_of_matrix, random_invertible, reduce_rows_against,
                     rref_array)
from .mpoly import (compose_ternary, monomials_of_degree, poly_from_vector,
                    proportional)
from .unipoly import UniPoly


class PlaneCurve:
    """A single homogeneous ternary form."""

    __slots__ = ("form",)

    def __init__(self, form):
        if form.ring.nvars != 3:
            raise ValueError("plane curves live in three variables")
        if form.is_zero() or not form.is_homogeneous():
            raise ValueError("defining form must be homogeneous and nonzero")
        self.form = form

    @property
    def ring(self):
        return self.form.ring

    @property
    def degree(self):
        return self.form.degree()

    def __repr__(self):
        return f"PlaneCurve(deg {self.degree} over F_{self.ring.p})"

    def __eq__(self, other):
        return isinstance(other, PlaneCurve) and self.form == other.form


def ramification_det(forms):
    """Determinant of the Jacobian of three equal-degree ternary forms;
    a curve of degree 3(d-1)."""
    f0, f1, f2 = forms
    ring = f0.ring
    rows = [[f.derivative(v) for v in range(3)] for f in (f0, f1, f2)]
    det = _det3(rows)
    if det.is_zero():
        raise NotGeneric("Jacobian determinant vanishes identically")
    return PlaneCurve(det)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def hessian_form(f, wrt=(0, 1, 2)):
    """Determinant of the matrix of second partials in the given variables;
    works in rings with extra parameters (used by the pencil solver)."""
    rows = [[f.derivative(i).derivative(j) for j in wrt] for i in wrt]
    return _det3(rows)


def hessian_curve(curve):
    h = hessian_form(curve.form)
    if h.is_zero():
        raise NotGeneric("Hessian vanishes identically")
    return PlaneCurve(h)


def singularity_count_expected(d):
    """Nodes plus cusps of the branching curve of a generic map of
    polynomial degree d: 9(d^2-2)(d-1)^2/2."""
    if d < 2:
        raise ValueError("degree parameter must be >= 2")
    num = 9 * (d * d - 2) * (d - 1) * (d - 1)
    assert num % 2 == 0
    return num // 2


def forms_have_common_zero(forms):
    """Exact projective common-zero test for three ternary forms of equal
    degree d: the coefficient map on degree 3d-2 is surjective iff the
    forms have no common zero over the closure."""
    d = forms[0].degree()
    if any(f.is_zero() for f in forms):
        return True
    if any(f.degree() != d for f in forms):
        raise ValueError("forms must have equal degree")
    nu = 3 * d - 2
    target = len(monomials_of_degree(3, nu))
    rank = graded_piece_basis(list(forms), nu).rank()
    return rank < target


def is_smooth(curve):
    """True iff the curve has no singular point over the closure."""
    partials = [curve.form.derivative(v) for v in range(3)]
    if any(g.is_zero() for g in partials):
        return False
    # char p does not divide any degree in range, so Euler's relation makes
    # the form itself redundant in the Jacobian ideal
    return not forms_have_common_zero(partials)


def sample_points_on_curve(curve, count, rng, avoid_singular_of=None, max_draws=None):
    """Rational points on the curve in the chart z=1, found by scanning
    random x-lines and solving the restriction for y."""
    F = curve.form
    ring = F.ring
    p = ring.p
    ctx = ring.ctx
    pts = set()
    draws = 0
    cap = max_draws or 200 * count + 500
    deg = curve.degree
    while len(pts) < count:
        draws += 1
        if draws > cap:
            raise NotGeneric(f"could not sample {count} points on the curve")
        x0 = rng.randrange(p)
        coeffs = [0] * (deg + 1)
        for (i, j, _k), c in F.terms.items():
            coeffs[j] = (coeffs[j] + c * pow(x0, i, p)) % p
        f = UniPoly(ctx, coeffs)
        if f.is_zero():
            continue
        for y0 in f.roots():
            pt = (x0, y0, 1)
            if avoid_singular_of is not None:
                if any(g.evaluate(pt) == 0 for g in avoid_singular_of):
                    continue
            pts.add(pt)
    out = sorted(pts)
    rng.shuffle(out)
    return out[:count] if count else out


def curve_through_points(ring, degree, points):
    """Forms of the given degree vanishing at all points: basis rows of the
    kernel of the evaluation matrix."""
    mons = monomials_of_degree(3, degree)
    p = ring.p
    rows = np.zeros((len(points), len(mons)), dtype=np.int64)
    for r, q in enumerate(points):
        powx = _power_row(q[0], degree, p)
        powy = _power_row(q[1], degree, p)
        powz = _power_row(q[2], degree, p)
        rows[r] = [powx[i] * powy[j] % p * powz[k] % p for (i, j, k) in mons]
    kernel = ModMatrix(ring.ctx, rows).nullspace()
    return [poly_from_vector(ring, kernel.a[i], degree) for i in range(kernel.rows)]


def _power_row(x, n, p):
    row = [1] * (n + 1)
    for k in range(1, n + 1):
        row[k] = row[k - 1] * x % p
    return row


def dual_curve(curve, seed=0):
    """Image of the Gauss map x -> grad F(x), as a single form.

    Sampled smooth points are pushed through the gradient and the minimal
    degree interpolating form is certified exactly: its pullback through
    grad F must be divisible by F.  NotPrincipal when no single form of
    degree up to the classical bound fits.
    """
    if curve.degree < 2:
        raise ValueError("dual needs degree >= 2")
    rng = random.Random(seed)
    F = curve.form
    ring = F.ring
    grads = [F.derivative(v) for v in range(3)]
    max_deg = curve.degree * (curve.degree - 1)
    imgs = []
    seen = set()

    def top_up(count):
        stalls = 0
        while len(imgs) < count:
            before = len(imgs)
            extra = sample_points_on_curve(curve, count - len(imgs) + 8, rng,
                                           avoid_singular_of=grads)
            for q in extra:
                g = tuple(gi.evaluate(q) for gi in grads)
                norm = _proj_normalize(g, ring.p)
                if norm is not None and norm not in seen:
                    seen.add(norm)
                    imgs.append(norm)
            stalls = stalls + 1 if len(imgs) == before else 0
            if stalls >= 4:
                raise NotPrincipal("Gauss image yields too few distinct points")

    for d in range(1, max_deg + 1):
        top_up(len(monomials_of_degree(3, d)) + 10)
        kernel = curve_through_points(ring, d, imgs)
        if not kernel:
            continue
        if len(kernel) > 1:
            raise NotPrincipal(f"ambiguous dual of degree {d}: kernel dim {len(kernel)}")
        cand = kernel[0]
        pullback = compose_ternary(cand, grads)
        if pullback.is_zero() or F.divides(pullback):
            return PlaneCurve(cand)
        raise NotPrincipal("interpolated dual fails the exact pullback certificate")
    raise NotPrincipal("no dual form found up to the degree bound")


def _proj_normalize(v, p):
    for k in (2, 1, 0):
        if v[k] % p:
            inv = pow(v[k] % p, p - 2, p)
            return tuple(x * inv % p for x in v)
    return None


def find_rational_factor(curve, max_degree=None, seed=0, tries=400):
    """Search for a proper rational factor by interpolating candidate
    divisors through random point subsets and attempting exact division.
    A screening proxy only: conjugate factorizations over extensions are
    invisible to it (smoothness already implies irreducibility)."""
    rng = random.Random(seed)
    F = curve.form
    ring = F.ring
    deg = curve.degree
    if max_degree is None:
        max_degree = deg // 2
    try:
        pool = sample_points_on_curve(curve, min(6 * deg, 40), rng)
    except NotGeneric:
        return None
    for d in range(1, max_degree + 1):
        need = len(monomials_of_degree(3, d)) - 1
        if need > len(pool):
            continue
        for _ in range(tries):
            subset = rng.sample(pool, need)
            for cand in curve_through_points(ring, d, subset):
                if cand.is_zero() or proportional(cand, F):
                    continue
                if cand.divides(F):
                    return cand
    return None


# ---------------------------------------------------------------------------
# singular locus radical

class SingularLocusData:
    """Radical of the singular locus plus the counting data the pipeline
    checks: point_count distinct singular points over the closure,
    mult_total the Jacobian-scheme degree (nodes count 1, cusps 2)."""

    __slots__ = ("curve", "radical_gens", "point_count", "mult_total",
                 "shear", "shear_inv", "azd", "nil_basis", "sf_x", "sf_y")

    def __init__(self, curve, radical_gens, point_count, mult_total,
                 shear=None, shear_inv=None, azd=None, nil_basis=None,
                 sf_x=None, sf_y=None):
        self.curve = curve
        self.radical_gens = radical_gens
        self.point_count = point_count
        self.mult_total = mult_total
        self.shear = shear
        self.shear_inv = shear_inv
        self.azd = azd
        self.nil_basis = nil_basis
        self.sf_x = sf_x
        self.sf_y = sf_y

    def min_degree(self):
        return min(g.degree() for g in self.radical_gens)

    def gens_of_degree(self, d):
        return [g for g in self.radical_gens if g.degree() == d]

    def __repr__(self):
        return (f"SingularLocusData(points={self.point_count}, "
                f"mult_total={self.mult_total}, gens={len(self.radical_gens)})")


def _poly_apply_block(mat, coeffs, block, p):
    """poly(mat) @ block by Paterson-Stockmeyer: O(sqrt(deg)) full matrix
    products plus O(deg) matrix-block products."""
    deg = len(coeffs) - 1
    if deg < 0:
        return np.zeros_like(block)
    s = max(1, int(deg ** 0.5) + 1)
    baby = [block % p]
    for _ in range(1, s):
        baby.append(_matmul_mod(mat, baby[-1], p))
    giant = None
    acc = None
    n_chunks = deg // s + 1
    for chunk in range(n_chunks - 1, -1, -1):
        part = np.zeros_like(block)
        for j in range(s):
            k = chunk * s + j
            if k <= deg and coeffs[k]:
                part = (part + coeffs[k] * baby[j]) % p
        if acc is None:
            acc = part
        else:
            if giant is None:
                giant = _matmul_mod(mat, mat, p)
                for _ in range(s - 2):
                    giant = _matmul_mod(giant, mat, p)
            acc = (_matmul_mod(giant, acc, p) + part) % p
    return acc


def _nilpotent_basis(azd, rng, draws=2):
    """Basis (RREF rows) of the nilpotent part of the quotient algebra.

    For a curve with only nodes and cusps the local algebras have nilpotency
    index <= 2, and sf(M_l) for the squarefree eliminant sf of a random
    linear form l maps the quotient onto exactly the nilpotent summands
    (each cusp direction survives unless l collapses it, probability 1/p;
    two independent draws are spanned together).
    """
    p = azd.ring.p
    dim = azd.dimension
    collected = []
    sf_first = None
    for _ in range(draws):
        coeffs = [rng.randrange(p) for _ in range(azd.ring.nvars)]
        mult = azd.mult_matrix_linear(coeffs)
        mp = minpoly_of_matrix(azd.ring.ctx, mult, rng)
        sf = mp.squarefree_part()
        if sf_first is None:
            sf_first = sf
        width = min(dim, dim - sf.degree + 24)
        if width <= 0:
            width = min(dim, 8)
        probe = np.array([[rng.randrange(p) for _ in range(width)] for _ in range(dim)],
                         dtype=np.int64)
        image = _poly_apply_block(mult, sf.coeffs, probe, p)
        collected.append(image.T)
    stacked = np.vstack(collected)
    reduced, pivots = rref_array(stacked, p)
    return reduced[: len(pivots)], pivots


def forms_common_zero_on_line(polys):
    """Exact check whether a family of ternary forms has a common zero
    (over the closure) on the line z = 0."""
    ring = polys[0].ring
    p = ring.p
    ctx = ring.ctx
    restricted = []
    for g in polys:
        terms = {e: c for e, c in g.terms.items() if e[2] == 0}
        restricted.append(terms)
    if all(not t for t in restricted):
        return True
    if all(_eval_terms(t, (0, 1, 0), p) == 0 for t in restricted):
        return True
    # remaining candidates (1 : y : 0), including y = 0: univariate gcd in y
    g = None
    for terms in restricted:
        coeffs = {}
        for (i, j, _k), c in terms.items():
            coeffs[j] = (coeffs.get(j, 0) + c) % p
        if not coeffs:
            continue
        u = UniPoly(ctx, [coeffs.get(k, 0) for k in range(max(coeffs) + 1)])
        g = u if g is None else g.gcd(u)
        if g.degree == 0:
            return False
    return g is None or g.degree > 0


def _line_at_infinity_has_singular_point(F):
    """Exact check whether the Jacobian scheme meets z = 0."""
    return forms_common_zero_on_line([F] + [F.derivative(v) for v in range(3)])


def _eval_terms(terms, pt, p):
    acc = 0
    for e, c in terms.items():
        t = c
        for i, x in enumerate(e):
            if x:
                t = t * pow(pt[i], x, p) % p
        acc = (acc + t) % p
    return acc


SMOOTH_PRECHECK_DEGREE_CAP = 24


def singular_radical(curve, seed=0, shear_tries=8):
    """Homogeneous radical of the singular locus of a nodal/cuspidal curve.

    Flow: random coordinate change so no singular point meets the chart
    line, staircase of the affine Jacobian scheme, nilpotent part of the
    quotient, homogeneous radical pieces from vanishing conditions, small
    generating set verified degree by degree, then the change undone.

    The exact smoothness certificate runs upfront only below a degree cap:
    above it the certificate matrix dwarfs the actual computation, and a
    smooth input surfaces as ChartFailure from the staircase instead.
    """
    ring = curve.ring
    ctx = ring.ctx
    rng = random.Random(seed)
    if curve.degree <= SMOOTH_PRECHECK_DEGREE_CAP and is_smooth(curve):
        return SingularLocusData(curve, [], 0, 0)
    failures = []
    for _ in range(shear_tries):
        shear = random_invertible(ctx, 3, rng)
        F_sh = curve.form.substitute_linear(shear)
        if _line_at_infinity_has_singular_point(F_sh):
            failures.append("singular point on the chart line")
            continue
        try:
            data = _radical_in_frame(F_sh, rng)
        except (NotZeroDimensional, ShapeFailure) as exc:
            failures.append(str(exc))
            continue
        gens_sh, point_count, mult_total, azd, nil, sf_x, sf_y = data
        shear_inv = invert_matrix(ctx, shear)
        gens = [g.substitute_linear(shear_inv) for g in gens_sh]
        return SingularLocusData(curve, gens, point_count, mult_total,
                                 shear=shear, shear_inv=shear_inv, azd=azd,
                                 nil_basis=nil, sf_x=sf_x, sf_y=sf_y)
    raise ChartFailure(f"no usable chart after {shear_tries} tries: {failures[-3:]}")


def _radical_in_frame(F_sh, rng):
    ring = F_sh.ring
    ctx = ring.ctx
    p = ring.p
    f = F_sh.dehomogenize(2)
    fx = f.derivative(0)
    fy = f.derivative(1)
    azd = AffineZeroDim([f, fx, fy])
    if ring.nvars == 3 and not azd.verify_commuting():
        raise ShapeFailure("multiplication matrices do not commute")
    mult_total = azd.dimension
    nil_rows, nil_pivots = _nilpotent_basis(azd, rng)
    point_count = mult_total - len(nil_pivots)
    sf_x = minpoly_of_matrix(ctx, azd.mult_matrix_var(0), rng).squarefree_part()
    sf_y = minpoly_of_matrix(ctx, azd.mult_matrix_var(1), rng).squarefree_part()
    gens = _homogeneous_radical_generators(ring, azd, nil_rows, nil_pivots, point_count)
    return gens, point_count, mult_total, azd, (nil_rows, nil_pivots), sf_x, sf_y


def _radical_piece_kernel(ring, azd, nil_rows, nil_pivots, degree):
    """Kernel basis (rows) of the point-vanishing conditions on homogeneous
    forms of the given degree, in the sheared frame."""
    p = ring.p
    mons = monomials_of_degree(3, degree)
    vecs = np.zeros((len(mons), azd.dimension), dtype=np.int64)
    for r, (i, j, _k) in enumerate(mons):
        vecs[r] = azd.nf_table[azd.index[(i, j)]]
    if len(nil_pivots):
        vecs = reduce_rows_against(vecs, nil_rows, nil_pivots, p)
    kernel = ModMatrix(ring.ctx, vecs.T).nullspace()
    return kernel


def _homogeneous_radical_generators(ring, azd, nil_rows, nil_pivots, point_count,
                                    max_extra_degrees=6):
    deg_cap = azd.bound - 2
    e = 1
    while e <= deg_cap:
        kernel = _radical_piece_kernel(ring, azd, nil_rows, nil_pivots, e)
        if kernel.rows:
            break
        e += 1
    else:
        raise NotZeroDimensional("no radical piece below the staircase bound")
    gens = [poly_from_vector(ring, kernel.a[i], e) for i in range(kernel.rows)]
    stable = 0
    for step in range(1, max_extra_degrees + 1):
        d = e + step
        if d > deg_cap:
            break
        kernel = _radical_piece_kernel(ring, azd, nil_rows, nil_pivots, d)
        true_dim = kernel.rows
        span = graded_piece_basis(gens, d)
        span_rref, span_pivots = span.rref()
        span_dim = len(span_pivots)
        if span_dim < true_dim:
            residual = reduce_rows_against(kernel.a, span_rref.a[: span_dim],
                                           span_pivots, ring.p)
            extra, extra_pivots = rref_array(residual, ring.p)
            for i in range(len(extra_pivots)):
                gens.append(poly_from_vector(ring, extra[i], d))
            stable = 0
        else:
            stable += 1
        conditions_rank = len(monomials_of_degree(3, d)) - true_dim
        if stable >= 2 and conditions_rank == point_count:
            break
    return gens

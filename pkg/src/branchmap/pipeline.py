"""Orchestration of the reconstruction, the forward oracle for generating
and verifying instances, and the manifest file format."""

import random
import time

from .curves import (PlaneCurve, curve_through_points, find_rational_factor,
                     forms_have_common_zero, is_smooth, ramification_det,
                     sample_points_on_curve, singular_radical,
                     singularity_count_expected)
from .errors import (BranchmapError, InterpolationDefect, NotGeneric,
                     PointSearchExhausted, ResourceLimit, VerificationFailed,
                     WrongDegree, WrongSingularityCount)
from .field import FieldCtx
from .groebner import AffineZeroDim, _points_from_mult_matrix
from .linalg import random_invertible
from .linnorm import adjoint_element, image_quadrics, linear_normalization, linear_syzygies
from .mpoly import PolyRing, compose_ternary, format_poly, monomials_of_degree
from .verpar import (SliceSolver, check_sample_conditions, find_point,
                     interpolate_map, jet_expand, projection_system)
from .veronese import veronese_from_quadrics, veronese_from_syzygies, verify_veronese


class PlanarMap:
    """Three equal-degree ternary forms with empty common zero locus."""

    __slots__ = ("forms",)

    def __init__(self, forms, check_base_locus=True):
        forms = tuple(forms)
        if len(forms) != 3:
            raise ValueError("a planar map needs three forms")
        d = forms[0].degree()
        if any(f.is_zero() or not f.is_homogeneous() or f.degree() != d for f in forms):
            raise ValueError("forms must be homogeneous of equal degree")
        if check_base_locus and forms_have_common_zero(forms):
            raise NotGeneric("the three forms have a common zero")
        self.forms = forms

    @property
    def degree(self):
        return self.forms[0].degree()

    @property
    def ring(self):
        return self.forms[0].ring

    def __repr__(self):
        return f"PlanarMap(degree {self.degree} over F_{self.ring.p})"

    def evaluate(self, point):
        return tuple(f.evaluate(point) for f in self.forms)


def verify_branching(f, b):
    """Final acceptance gate: the pullback of the candidate branching curve
    must be exactly divisible by the square of the ramification
    determinant.  Two exact divisions, no tolerance."""
    if isinstance(f, PlanarMap):
        forms = f.forms
    else:
        forms = tuple(f)
    r = ramification_det(forms)
    pullback = compose_ternary(b.form, list(forms))
    try:
        q1 = pullback.exact_div(r.form)
        q1.exact_div(r.form)
    except BranchmapError:
        return False
    return True


def branching_curve(f, r, seed=0, margin=40):
    """Branching curve of a map with smooth ramification curve r, found by
    interpolating through images of sampled ramification points and
    certified by the exact divisibility gate."""
    forms = f.forms if isinstance(f, PlanarMap) else tuple(f)
    d = forms[0].degree()
    ring = forms[0].ring
    p = ring.p
    deg_b = d * r.degree
    target_ring = PolyRing(ring.ctx, ("x", "y", "z"))
    rng = random.Random(seed)
    need = len(monomials_of_degree(3, deg_b))
    images = set()
    for round_ in range(6):
        src = sample_points_on_curve(r, need + margin, rng)
        for q in src:
            v = tuple(g.evaluate(q) for g in forms)
            norm = _normalize(v, p)
            if norm is not None:
                images.add(norm)
        if len(images) < need + 10:
            continue
        kernel = curve_through_points(target_ring, deg_b, sorted(images))
        if len(kernel) == 1:
            b = PlaneCurve(kernel[0])
            if verify_branching(forms, b):
                return b
            raise NotGeneric("interpolated image curve fails the branching identity")
        if len(kernel) == 0:
            raise NotGeneric("no curve of the expected degree through the images")
    raise NotGeneric("branching-curve interpolation did not isolate one curve")


def _normalize(v, p):
    for k in (2, 1, 0):
        if v[k] % p:
            inv = pow(v[k] % p, p - 2, p)
            return tuple(x * inv % p for x in v)
    return None


def forward_generate(d, seed=0, ctx=None, max_tries=60):
    """Random generic planar map with its ramification and branching
    curves.  Genericity screening: empty base locus, smooth (hence
    irreducible) ramification curve, no small rational factor, and a
    one-dimensional interpolation kernel for the image curve."""
    if d < 2:
        raise WrongDegree("polynomial degree must be >= 2")
    ctx = ctx or FieldCtx()
    ring = PolyRing(ctx, ("s", "t", "u"))
    rng = random.Random(seed)
    for attempt in range(max_tries):
        forms = [ring.random_form(d, rng) for _ in range(3)]
        if forms_have_common_zero(forms):
            continue
        try:
            r = ramification_det(forms)
        except NotGeneric:
            continue
        if not is_smooth(r):
            continue
        if find_rational_factor(r, seed=rng.randrange(1 << 30), tries=40) is not None:
            continue
        try:
            b = branching_curve(forms, r, seed=rng.randrange(1 << 30))
        except NotGeneric:
            continue
        assert b.degree == 3 * d * (d - 1) == d * r.degree
        return PlanarMap(forms, check_base_locus=False), r, b
    raise NotGeneric(f"no generic map found in {max_tries} attempts")


def preimage_count(f, q, seed=0, shear_tries=8):
    """Rational preimages of a target point and the multiplicity-counted
    fiber degree (d^2 for generic targets off the branching curve)."""
    forms = f.forms if isinstance(f, PlanarMap) else tuple(f)
    ring = forms[0].ring
    ctx = ring.ctx
    p = ring.p
    q = tuple(int(x) % p for x in q)
    minors = []
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        minors.append(forms[j].scale(q[i]) - forms[i].scale(q[j]))
    minors = [m for m in minors if not m.is_zero()]
    if not minors:
        raise NotGeneric("target minors vanish identically")
    rng = random.Random(seed)
    from .curves import forms_common_zero_on_line
    for _ in range(shear_tries):
        shear = random_invertible(ctx, 3, rng)
        sheared = [m.substitute_linear(shear) for m in minors]
        if forms_common_zero_on_line(sheared):
            continue
        affine = [m.dehomogenize(2) for m in sheared]
        azd = AffineZeroDim(affine)
        total = azd.dimension
        var_vecs = azd.variable_nf_vectors()
        one_vec = azd.one_vector()
        for _ in range(6):
            coeffs = [rng.randrange(p) for _ in range(2)]
            mult = azd.mult_matrix_linear(coeffs)
            pts = _points_from_mult_matrix(ctx, mult, var_vecs, one_vec, rng)
            if pts is None:
                continue
            rational = sum(1 for pt in pts
                           if all(m.evaluate(pt) == 0 for m in affine))
            return rational, total
    raise ResourceLimit("no usable chart for the fiber computation")


class ReconstructionReport:
    """Stage log of one reconstruction: dimensions, timings, outcome."""

    def __init__(self, d, seed):
        self.d = d
        self.seed = seed
        self.stages = []
        self.dims = {}
        self.maps = []
        self.verified = []
        self.error = None
        self.error_kind = None

    def stage(self, name, t0):
        self.stages.append((name, round(time.time() - t0, 3)))

    @property
    def ok(self):
        return bool(self.maps) and all(self.verified)

    def exit_code(self):
        if self.ok:
            return 0
        return 3 if self.error_kind == "resource" else 2

    def lines(self):
        out = [f"reconstruction report (d={self.d}, seed={self.seed})"]
        for name, dt in self.stages:
            out.append(f"  stage {name}: {dt}s")
        for k, v in self.dims.items():
            out.append(f"  dim {k} = {v}")
        if self.error:
            out.append(f"  failure: {type(self.error).__name__}: {self.error}")
        out.append(f"  maps emitted: {len(self.maps)}")
        return out

    def machine_block(self):
        kv = {"d": self.d, "seed": self.seed, "ok": int(self.ok),
              "exit_code": self.exit_code(), "maps": len(self.maps)}
        kv.update({f"dim_{k}": v for k, v in self.dims.items()})
        if self.error:
            kv["error"] = type(self.error).__name__
        return "\n".join(f"{k}={v}" for k, v in kv.items())


def reconstruct(b, d, seed=0, max_point_tries=200, samples_factor=2,
                holdout=10):
    """Algorithm dispatch: degree 2 through the Hessian pencil of the dual,
    degree >= 3 through linear normalization, the Veronese surface, and
    sample interpolation.  A map is emitted only if the exact branching
    identity holds against the input curve."""
    report = ReconstructionReport(d, seed)
    rng = random.Random(seed)
    try:
        _reconstruct_into(report, b, d, seed, rng, max_point_tries,
                          samples_factor, holdout)
    except BranchmapError as exc:
        report.error = exc
        report.error_kind = exc.kind
    return report


def _reconstruct_into(report, b, d, seed, rng, max_point_tries, samples_factor,
                      holdout):
    t0 = time.time()
    if b.degree != 3 * d * (d - 1):
        raise WrongDegree(
            f"curve degree {b.degree} is not 3d(d-1) = {3 * d * (d - 1)}")
    if d == 2:
        from .degree2 import reconstruct_degree2
        solution = reconstruct_degree2(b, seed=seed)
        report.dims["mu_degree"] = solution.mu_poly.degree
        report.dims["mu_rational_roots"] = len(solution.mu_roots)
        for pm in solution.maps:
            report.maps.append(pm)
            report.verified.append(True)  # gate applied inside
        report.stage("hessian-pencil", t0)
        return
    sing = singular_radical(b, seed=rng.randrange(1 << 30))
    report.dims["singular_points"] = sing.point_count
    report.dims["jacobian_scheme_degree"] = sing.mult_total
    report.stage("adjoint-ideal", t0)
    expected = singularity_count_expected(d)
    if sing.point_count != expected:
        raise WrongSingularityCount(
            f"found {sing.point_count} singular points, expected {expected}")
    t0 = time.time()
    g, deg_g = adjoint_element(b, sing, seed=rng.randrange(1 << 30))
    pc = linear_normalization(b, sing, g=g, expected_d=d)
    report.dims["N"] = pc.ambient_dim
    report.dims["adjoint_degree"] = deg_g
    report.stage("linear-normalization", t0)
    t0 = time.time()
    qs = image_quadrics(pc)
    report.dims["quadrics"] = qs.dim
    if d == 3:
        syz = linear_syzygies(qs)
        report.dims["linear_syzygies"] = syz.dim
        vi = veronese_from_syzygies(qs, syz)
        report.dims["veronese_quadrics"] = vi.dim
    else:
        vi = veronese_from_quadrics(qs, d)
        report.dims["veronese_quadrics"] = vi.dim
    sample_src = sample_points_on_curve(b, 4, rng,
                                        avoid_singular_of=sing.radical_gens)
    probe = None
    for ptb in sample_src:
        vec = _normalize(tuple(f.evaluate(ptb) for f in pc.forms), b.ring.p)
        if vec is not None:
            probe = vec
            break
    if not verify_veronese(vi, probe):
        from .errors import NotABranchingCurve
        raise NotABranchingCurve("recovered quadric space fails the surface checks",
                                 dims=dict(report.dims))
    report.stage("veronese-surface", t0)
    t0 = time.time()
    solver = SliceSolver(vi, seed=rng.randrange(1 << 30))
    y1 = find_point(vi, max_tries=max_point_tries, solver=solver)
    chart1 = jet_expand(vi, y1, d)
    pi = None
    from .errors import DegenerateConfiguration, SingularPoint
    last = None
    for _ in range(8):
        y2 = find_point(vi, max_tries=max_point_tries, solver=solver)
        if y2 == y1:
            continue
        try:
            chart2 = jet_expand(vi, y2, d)
            pi = projection_system(vi, chart1, chart2)
            break
        except (DegenerateConfiguration, SingularPoint) as exc:
            last = exc
    if pi is None:
        raise DegenerateConfiguration(f"no usable point pair: {last}")
    report.dims["projection_dim"] = 3
    report.stage("points-and-projection", t0)
    t0 = time.time()
    target = samples_factor * 3 * len(monomials_of_degree(3, d)) + holdout
    pool = {y1, y2}
    draws_cap = max_point_tries * 40
    while len(pool) < target:
        if solver.draws > draws_cap:
            raise PointSearchExhausted(
                f"only {len(pool)} of {target} samples after {solver.draws} slices")
        pts, _ = solver.draw_slice()
        pool.update(pts)
    samples = sorted(pool, key=lambda s: s.coords)
    report.dims["samples"] = len(samples)
    report.dims["slice_draws"] = solver.draws
    forms, held = interpolate_map(pc, vi, pi, samples, d, holdout=holdout)
    if held and not check_sample_conditions(forms, pi, held, b.ring.p):
        raise InterpolationDefect("held-out samples violate the cross conditions")
    report.stage("parametrization", t0)
    t0 = time.time()
    if forms_have_common_zero(forms):
        raise VerificationFailed("interpolated map has base points")
    pm = PlanarMap(forms, check_base_locus=False)
    if not verify_branching(pm, b):
        raise VerificationFailed("branching identity fails for the candidate map")
    report.maps.append(pm)
    report.verified.append(True)
    report.stage("verification", t0)


# ---------------------------------------------------------------------------
# manifest files

def write_manifest(path, header, polys):
    lines = []
    for k, v in header.items():
        lines.append(f"{k} = {v}")
    for name, f in polys:
        lines.append(f"{name} = {format_poly(f)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_manifest(path):
    """Returns (header dict, list of (name, text)).  Reserved header keys:
    p, d, vars; every other entry is a named polynomial."""
    header = {}
    polys = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad manifest line: {line!r}")
            name, _, rest = line.partition("=")
            name = name.strip()
            rest = rest.strip()
            if name in ("p", "d"):
                header[name] = int(rest)
            elif name == "vars":
                header[name] = tuple(s.strip() for s in rest.split(","))
            else:
                polys.append((name, rest))
    return header, polys


def ring_from_header(header):
    p = header.get("p", 32003)
    names = header.get("vars", ("x", "y", "z"))
    return PolyRing(FieldCtx(p), tuple(names))


def load_curve(path):
    header, polys = read_manifest(path)
    ring = ring_from_header(header)
    named = dict(polys)
    for key in ("B", "curve", "F"):
        if key in named:
            return PlaneCurve(ring.parse(named[key])), header
    if len(polys) == 1:
        return PlaneCurve(ring.parse(polys[0][1])), header
    raise ValueError("manifest does not contain a single named curve")


def load_map(path):
    header, polys = read_manifest(path)
    ring = ring_from_header(header)
    named = dict(polys)
    keys = [k for k in ("F0", "F1", "F2") if k in named]
    if len(keys) == 3:
        return PlanarMap([ring.parse(named[k]) for k in keys]), header
    if len(polys) == 3:
        return PlanarMap([ring.parse(t) for _, t in polys]), header
    raise ValueError("manifest does not contain three map components")


def save_map(path, pm, d=None):
    header = {"p": pm.ring.p, "vars": ",".join(pm.ring.names)}
    if d is not None:
        header["d"] = d
    write_manifest(path, header, [(f"F{i}", f) for i, f in enumerate(pm.forms)])


def save_curve(path, curve, d=None, name="B"):
    header = {"p": curve.ring.p, "vars": ",".join(curve.ring.names)}
    if d is not None:
        header["d"] = d
    write_manifest(path, header, [(name, curve.form)])

"""Reconstruction of gradient maps of polynomial degree two from a
nine-cuspidal sextic: dual cubic, Hessian pencil, and the cubic in the
pencil parameter whose rational roots give the maps."""

from .curves import (PlaneCurve, dual_curve, hessian_form, is_smooth,
                     ramification_det, singular_radical)
from .errors import (DivisionByZero, DualNotSmoothCubic, NoRationalRoot,
                     NotGeneric, NotNineCuspidalSextic)
from .mpoly import PolyRing, proportional
from .unipoly import UniPoly


class HessianPencilSolution:
    __slots__ = ("dual_cubic", "mu_poly", "mu_roots", "maps")

    def __init__(self, dual_cubic, mu_poly, mu_roots, maps):
        self.dual_cubic = dual_cubic
        self.mu_poly = mu_poly
        self.mu_roots = mu_roots
        self.maps = maps

    def __repr__(self):
        return (f"HessianPencilSolution({len(self.maps)} maps, "
                f"mu roots {sorted(self.mu_roots)})")


def hessian_pencil_step(ctx, lam):
    """Pencil parameter of the Hessian of s^3+t^3+u^3+lam*s*t*u:
    -(lam^3+108)/(3*lam^2)."""
    lam %= ctx.p
    if lam == 0:
        raise DivisionByZero("pencil step undefined at 0")
    num = (-(pow(lam, 3, ctx.p) + 108)) % ctx.p
    return num * ctx.inv(3 * lam * lam % ctx.p) % ctx.p


def pencil_cubic(dual):
    """The degree-3 polynomial in mu whose roots give all cubics G with
    G = H(dual) + mu*dual and H(G) proportional to dual.

    The proportionality is eliminated through all coefficient cross
    products, robust to zero coefficients in the dual."""
    ring = dual.ring
    ctx = ring.ctx
    ext = PolyRing(ctx, ring.names + ("mu",))
    lift = lambda f: f.homogenize(ext, 3, degree=f.degree())
    c_lift = lift(dual.form)
    h_lift = lift(hessian_form(dual.form))
    mu = ext.var(3)
    g_sym = h_lift + mu * c_lift
    hg = hessian_form(g_sym, wrt=(0, 1, 2))
    # group by the curve monomials; coefficients are polynomials in mu
    coeff_polys = {}
    for e, c in hg.terms.items():
        key = e[:3]
        coeff_polys.setdefault(key, {})[e[3]] = c
    c_coeffs = {e: c for e, c in dual.form.terms.items()}
    keys = sorted(set(coeff_polys) | set(c_coeffs))
    as_uni = {}
    for key in keys:
        d = coeff_polys.get(key, {})
        as_uni[key] = UniPoly(ctx, [d.get(k, 0) for k in range(max(d) + 1 if d else 1)])
    gcd = None
    for i, ki in enumerate(keys):
        for kj in keys[i + 1:]:
            ci = c_coeffs.get(ki, 0)
            cj = c_coeffs.get(kj, 0)
            cross = as_uni[ki].scale(cj) - as_uni[kj].scale(ci)
            if cross.is_zero():
                continue
            gcd = cross if gcd is None else gcd.gcd(cross)
            if gcd.degree == 0:
                return UniPoly.one(ctx)
    if gcd is None:
        raise NotGeneric("Hessian of the pencil is identically proportional")
    return gcd.monic()


def reconstruct_degree2(b, seed=0):
    """All gradient maps of polynomial degree 2 with branching curve b.

    Steps: dual cubic, Hessian pencil cubic in mu, rational roots, one
    gradient map per root.  Every returned map satisfies the exact pencil
    identity and ramification(grad G) ~ H(G)."""
    from .pipeline import PlanarMap, verify_branching
    if b.degree != 6:
        raise NotNineCuspidalSextic(f"expected a sextic, got degree {b.degree}")
    sing = singular_radical(b, seed=seed)
    if sing.point_count != 9:
        raise NotNineCuspidalSextic(
            f"expected 9 singular points, found {sing.point_count}")
    dual = dual_curve(b, seed=seed)
    if dual.degree != 3 or not is_smooth(dual):
        raise DualNotSmoothCubic(f"dual has degree {dual.degree}")
    mu_poly = pencil_cubic(dual)
    if mu_poly.degree != 3:
        raise NotGeneric(f"pencil cubic has degree {mu_poly.degree}, want 3")
    roots = sorted(mu_poly.roots())
    hessian = hessian_form(dual.form)
    maps = []
    for mu in roots:
        g = hessian + dual.form.scale(mu)
        g_curve = PlaneCurve(g)
        if not is_smooth(g_curve):
            raise NotGeneric("pencil member is singular")
        hg = hessian_form(g)
        if not proportional(hg, dual.form):
            raise NotGeneric("pencil identity fails at a rational root")
        grad = tuple(g.derivative(v) for v in range(3))
        ram = ramification_det(grad)
        if not proportional(ram.form, hg):
            raise NotGeneric("gradient ramification differs from the Hessian")
        pm = PlanarMap(grad)
        if not verify_branching(pm, b):
            raise NotGeneric("reconstructed map fails the branching identity")
        maps.append(pm)
    solution = HessianPencilSolution(dual, mu_poly, set(roots), maps)
    if not roots:
        raise NoRationalRoot(
            "all three pencil parameters lie in a proper extension",
            mu_poly=solution)
    return solution

"""Buchberger engine and the ideal-theoretic toolkit built on it.

The general operations (elimination, saturation, quotient, solving) run on
the Buchberger kernel.  Hot paths in the reconstruction pipeline use the
linear-algebra staircase engine (AffineZeroDim) instead, with the
Buchberger route kept for cross-validation on small instances.
"""

import heapq
import random

import numpy as np

from .errors import NotZeroDimensional, ResourceLimit, ShapeFailure
from .linalg import ModMatrix, minpoly_of_matrix, rref_array
from .mpoly import (DRL, Block, Lex, MPoly, PolyRing, monomial_index_up_to,
                    monomial_positions, monomials_up_to_degree)

DEFAULT_MAX_PAIRS = 100000


class Ideal:
    __slots__ = ("ring", "gens")

    def __init__(self, gens, ring=None):
        gens = [g for g in gens if not g.is_zero()]
        if ring is None:
            if not gens:
                raise ValueError("empty ideal needs an explicit ring")
            ring = gens[0].ring
        if any(g.ring != ring for g in gens):
            raise ValueError("generators live in different rings")
        self.ring = ring
        self.gens = list(gens)

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens over {self.ring!r})"


class GroebnerBasis:
    __slots__ = ("ring", "order", "gens", "reduced", "_reducers")

    def __init__(self, ring, order, gens, reduced=True):
        self.ring = ring
        self.order = order
        self.gens = list(gens)
        self.reduced = reduced
        self._reducers = _make_reducers(self.gens, order)

    def __repr__(self):
        return f"GroebnerBasis({len(self.gens)} gens, {self.order!r})"

    def leading_monomials(self):
        return [g.leading_monomial(self.order) for g in self.gens]

    def contains(self, f):
        return normal_form(f, self).is_zero()


def _make_reducers(gens, order):
    out = []
    for g in gens:
        lm = g.leading_monomial(order)
        lc_inv = g.ring.ctx.inv(g.terms[lm])
        tail = [(e, c) for e, c in g.terms.items() if e != lm]
        out.append((lm, lc_inv, tail))
    return out


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _reduce_full(terms, reducers, order, p, sugar=None):
    """Full normal-form reduction of a term dict.  Returns (dict, sugar)."""
    work = dict(terms)
    out = {}
    key = order.key
    while work:
        lm = max(work, key=key)
        c = work.pop(lm)
        hit = None
        for red in reducers:
            if _divides(red[0], lm):
                hit = red
                break
        if hit is None:
            out[lm] = c
            continue
        rlm, lc_inv, tail = hit
        diff = tuple(a - b for a, b in zip(lm, rlm))
        factor = c * lc_inv % p
        if sugar is not None:
            sugar = max(sugar, sum(diff) + sum(rlm) + 0)
        for e, v in tail:
            t = tuple(x + y for x, y in zip(e, diff))
            s = (work.get(t, 0) - factor * v) % p
            if s:
                work[t] = s
            else:
                work.pop(t, None)
    return out, sugar


def normal_form(f, gb):
    """Remainder of f under full reduction by the basis; F_p-linear in f."""
    if f.ring != gb.ring:
        raise ValueError("polynomial and basis live in different rings")
    out, _ = _reduce_full(f.terms, gb._reducers, gb.order, f.ring.p)
    return MPoly(f.ring, out)


def _lcm_exps(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b):
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def buchberger(ideal, order=DRL, max_pairs=None, max_degree=None):
    """Unique reduced Groebner basis, via Gebauer-Moller pair elimination
    and sugar-degree selection.  Raises ResourceLimit when the pair or
    degree budget is exceeded (never truncates silently)."""
    if max_pairs is None:
        max_pairs = DEFAULT_MAX_PAIRS
    ring = ideal.ring
    p = ring.p
    basis = []       # list of (lm, poly, sugar)
    pairs = []       # heap of (sugar, deg lcm, lcm, i, j)

    def add_poly(f, sugar):
        f = f.monic(order)
        lm = f.leading_monomial(order)
        t = len(basis)
        basis.append((lm, f, sugar))
        # Gebauer-Moller update of the pair set against element t
        new_pairs = []
        for i in range(t):
            li = basis[i][0]
            l = _lcm_exps(li, lm)
            s = max(basis[i][2] + sum(l) - sum(li), sugar + sum(l) - sum(lm))
            new_pairs.append((i, l, s))
        keep = []
        for idx, (i, l, s) in enumerate(new_pairs):
            if _coprime(basis[i][0], lm):
                continue
            drop = False
            for jdx, (j, l2, _s2) in enumerate(new_pairs):
                if jdx == idx or (j, l2) == (i, l):
                    continue
                if _divides(l2, l) and l2 != l:
                    drop = True
                    break
            if not drop:
                keep.append((i, l, s))
        seen = {}
        for i, l, s in keep:
            seen.setdefault(l, (i, s))  # F criterion: one pair per lcm
        survivors = [(i, l, s) for l, (i, s) in seen.items()]
        # B criterion against existing pairs
        alive = []
        for entry in pairs:
            s, dl, l, i, j = entry
            if (_divides(lm, l) and _lcm_exps(basis[i][0], lm) != l
                    and _lcm_exps(basis[j][0], lm) != l):
                continue
            alive.append(entry)
        pairs[:] = alive
        heapq.heapify(pairs)
        for i, l, s in survivors:
            heapq.heappush(pairs, (s, sum(l), l, i, t))

    for g in ideal.gens:
        red, sg = _reduce_full(g.terms, _make_reducers([b[1] for b in basis], order)
                               if basis else [], order, p, sugar=g.degree())
        if red:
            add_poly(MPoly(ring, red), sg)

    processed = 0
    while pairs:
        s, dl, l, i, j = heapq.heappop(pairs)
        processed += 1
        if processed > max_pairs:
            raise ResourceLimit(f"pair budget {max_pairs} exceeded")
        if max_degree is not None and s > max_degree:
            raise ResourceLimit(f"sugar degree {s} exceeds budget {max_degree}")
        lmi, fi, _si = basis[i]
        lmj, fj, _sj = basis[j]
        ui = tuple(a - b for a, b in zip(l, lmi))
        uj = tuple(a - b for a, b in zip(l, lmj))
        spoly = fi.mul_term(ui, 1) - fj.mul_term(uj, 1)
        if spoly.is_zero():
            continue
        reducers = _make_reducers([b[1] for b in basis], order)
        red, sg = _reduce_full(spoly.terms, reducers, order, p, sugar=s)
        if red:
            add_poly(MPoly(ring, red), sg)

    # minimalize and tail-reduce
    polys = [b[1] for b in basis]
    lms = [b[0] for b in basis]
    minimal = []
    for i, lm in enumerate(lms):
        if any(j != i and _divides(lms[j], lm) and (lms[j] != lm or j < i)
               for j in range(len(lms))):
            continue
        minimal.append(polys[i])
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        red, _ = _reduce_full(g.terms, _make_reducers(others, order), order, p)
        if red:
            reduced.append(MPoly(ring, red).monic(order))
    reduced.sort(key=lambda g: order.key(g.leading_monomial(order)))
    return GroebnerBasis(ring, order, reduced, reduced=True)


# ---------------------------------------------------------------------------
# elimination / saturation / intersection / quotient

def eliminate(ideal, k, max_pairs=None, max_degree=None):
    """Generators of ideal ∩ k[x_(k+1), ...]: the first k variables are
    eliminated via a block order."""
    if k == 0:
        gb = buchberger(ideal, DRL, max_pairs, max_degree)
        return Ideal(gb.gens, ring=ideal.ring)
    gb = buchberger(ideal, Block(k), max_pairs, max_degree)
    kept = [g for g in gb.gens if all(all(e[i] == 0 for i in range(k)) for e in g.terms)]
    return Ideal(kept, ring=ideal.ring)


def _extend_ring_front(ring, name):
    return PolyRing(ring.ctx, (name,) + ring.names)


def _lift_front(f, ring_ext):
    return MPoly(ring_ext, {(0,) + e: c for e, c in f.terms.items()})


def _drop_front(f, ring_base):
    return MPoly(ring_base, {e[1:]: c for e, c in f.terms.items()})


def saturate(ideal, f, max_pairs=None, max_degree=None):
    """ideal : f^infinity via the inverse-variable trick."""
    if f.is_zero():
        raise ValueError("cannot saturate by zero")
    ring = ideal.ring
    ext = _extend_ring_front(ring, "_t")
    gens = [_lift_front(g, ext) for g in ideal.gens]
    t = ext.var(0)
    gens.append(t * _lift_front(f, ext) - ext.one())
    elim = eliminate(Ideal(gens, ring=ext), 1, max_pairs, max_degree)
    return Ideal([_drop_front(g, ring) for g in elim.gens], ring=ring)


def saturate_last_var_degrevlex(ideal, max_pairs=None, max_degree=None):
    """Divide-out shortcut: for homogeneous ideals, a degrevlex basis
    yields ideal : z^infinity (z the last variable) by stripping z-powers."""
    gb = buchberger(ideal, DRL, max_pairs, max_degree)
    ring = ideal.ring
    last = ring.nvars - 1
    out = []
    for g in gb.gens:
        v = min(e[last] for e in g.terms)
        if v == 0:
            out.append(g)
        else:
            out.append(MPoly(ring, {e[:last] + (e[last] - v,): c for e, c in g.terms.items()}))
    return Ideal(out, ring=ring)


def intersect(a, b, max_pairs=None, max_degree=None):
    """a ∩ b via t*a + (1-t)*b and elimination of t."""
    ring = a.ring
    ext = _extend_ring_front(ring, "_t")
    t = ext.var(0)
    one_minus_t = ext.one() - t
    gens = [t * _lift_front(g, ext) for g in a.gens]
    gens += [one_minus_t * _lift_front(g, ext) for g in b.gens]
    elim = eliminate(Ideal(gens, ring=ext), 1, max_pairs, max_degree)
    return Ideal([_drop_front(g, ring) for g in elim.gens], ring=ring)


def ideal_quotient(a, b, max_pairs=None, max_degree=None):
    """a : b  =  intersection over generators h of b of (a : h), with
    (a : h) = (a ∩ <h>) / h."""
    ring = a.ring
    result = None
    for h in b.gens:
        if h.is_zero():
            continue
        cap = intersect(a, Ideal([h], ring=ring), max_pairs, max_degree)
        quo = Ideal([g.exact_div(h) for g in cap.gens], ring=ring)
        result = quo if result is None else intersect(result, quo, max_pairs, max_degree)
    if result is None:
        return Ideal(list(a.gens), ring=ring)
    gb = buchberger(result, DRL, max_pairs, max_degree)
    return Ideal(gb.gens, ring=ring)


# ---------------------------------------------------------------------------
# zero-dimensional solving

class ZeroDimSolution:
    __slots__ = ("points", "total_degree")

    def __init__(self, points, total_degree):
        self.points = points
        self.total_degree = total_degree

    def __repr__(self):
        return f"ZeroDimSolution({len(self.points)} rational, total_degree={self.total_degree})"


class AffineZeroDim:
    """Quotient-ring data of an affine zero-dimensional ideal, computed by
    row reduction of shifted generators up to a degree bound (no Groebner
    basis).  The staircase agrees with the graded-order staircase once it
    is stable from one bound to the next.
    """

    def __init__(self, gens, bound=None, max_escalations=4, stability=True):
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            raise ValueError("no generators")
        self.ring = gens[0].ring
        self.gens = gens
        degs = sorted((g.degree() for g in gens), reverse=True)
        if bound is None:
            bound = degs[0] + (degs[1] if len(degs) > 1 else degs[0]) - 1
        bound = max(bound, degs[0] + 1)
        if stability:
            for _ in range(max_escalations):
                stair_lo = self._staircase_at(bound)
                stair, table, pivots, mons = self._staircase_at(bound + 1, full=True)
                if stair_lo == stair:
                    break
                bound += 2
            else:
                raise NotZeroDimensional(
                    f"staircase did not stabilize by degree {bound}")
            self.bound = bound + 1
        else:
            # single-bound mode: the caller certifies the quotient dimension
            # externally; the surjection argument then pins the structure,
            # provided the staircase clears the bound by one degree
            stair, table, pivots, mons = self._staircase_at(bound, full=True)
            self.bound = bound
        self.monomials = mons
        self.index = {m: i for i, m in enumerate(mons)}
        self.staircase = sorted(stair, key=lambda m: (sum(m), m))
        self.stair_index = {m: i for i, m in enumerate(self.staircase)}
        if self.staircase and max(sum(m) for m in self.staircase) > self.bound - 1:
            raise NotZeroDimensional("staircase reaches the degree bound")
        self._build_nf_table(table, pivots)

    def _shift_rows(self, bound):
        n = self.ring.nvars
        idx = monomial_index_up_to(n, bound)
        blocks = []
        for g in self.gens:
            d = g.degree()
            if d > bound:
                continue
            exps = np.array(list(g.terms.keys()), dtype=np.int64)
            coeffs = np.array(list(g.terms.values()), dtype=np.int64)
            shifts = np.array(monomials_up_to_degree(n, bound - d), dtype=np.int64)
            s, t = shifts.shape[0], exps.shape[0]
            combined = (shifts[:, None, :] + exps[None, :, :]).reshape(s * t, n)
            cols = monomial_positions(combined, n, bound, upto=True)
            block = np.zeros((s, len(idx)), dtype=np.int64)
            block[np.repeat(np.arange(s), t), cols] = np.tile(coeffs, s)
            blocks.append(block)
        return np.vstack(blocks), idx

    def _staircase_at(self, bound, full=False):
        mat, idx = self._shift_rows(bound)
        reduced, pivots = rref_array(mat, self.ring.p)
        mons = monomials_up_to_degree(self.ring.nvars, bound)
        pivot_set = set(pivots)
        stair = {mons[j] for j in range(len(mons)) if j not in pivot_set}
        if full:
            return stair, reduced[: len(pivots)], pivots, mons
        return stair

    def _build_nf_table(self, table, pivots):
        p = self.ring.p
        n_mons = len(self.monomials)
        k = len(self.staircase)
        stair_cols = np.array([self.index[m] for m in self.staircase], dtype=np.int64)
        nf = np.zeros((n_mons, k), dtype=np.int64)
        for m in self.staircase:
            nf[self.index[m], self.stair_index[m]] = 1
        for r, c in enumerate(pivots):
            nf[c] = (-table[r, stair_cols]) % p
        self.nf_table = nf

    @property
    def dimension(self):
        return len(self.staircase)

    def nf_vector(self, f):
        """Normal form of an affine polynomial of degree <= bound, as a
        vector over the staircase basis."""
        if f.degree() > self.bound:
            raise ValueError("degree exceeds the staircase bound")
        p = self.ring.p
        out = np.zeros(self.dimension, dtype=np.int64)
        for e, c in f.terms.items():
            out = (out + c * self.nf_table[self.index[e]]) % p
        return out

    def contains(self, f):
        return not self.nf_vector(f).any()

    def mult_matrix_var(self, v):
        k = self.dimension
        m = np.zeros((k, k), dtype=np.int64)
        for j, b in enumerate(self.staircase):
            e = list(b)
            e[v] += 1
            m[:, j] = self.nf_table[self.index[tuple(e)]]
        return m

    def mult_matrix_linear(self, coeffs, const=0):
        p = self.ring.p
        k = self.dimension
        m = (const % p) * np.eye(k, dtype=np.int64)
        for v, c in enumerate(coeffs):
            if c % p:
                m = (m + (c % p) * self.mult_matrix_var(v)) % p
        return m

    def verify_commuting(self):
        p = self.ring.p
        mats = [self.mult_matrix_var(v) for v in range(self.ring.nvars)]
        from .linalg import _matmul_mod
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                ab = _matmul_mod(mats[i], mats[j], p)
                ba = _matmul_mod(mats[j], mats[i], p)
                if not np.array_equal(ab, ba):
                    return False
        return True

    def variable_nf_vectors(self):
        return [self.nf_vector(self.ring.var(v)) for v in range(self.ring.nvars)]

    def one_vector(self):
        return self.nf_vector(self.ring.one())


def _points_from_mult_matrix(ctx, mult, var_vectors, one_vec, rng):
    """Rational points via eigen-functionals of the transposed
    multiplication matrix.  Returns None when an eigenvalue fails to
    separate (caller redraws the linear form)."""
    p = ctx.p
    mp = minpoly_of_matrix(ctx, mult, rng)
    sf = mp.squarefree_part()
    pts = []
    for lam in sorted(sf.roots()):
        shifted = (mult.T - lam * np.eye(mult.shape[0], dtype=np.int64)) % p
        ker = ModMatrix(ctx, shifted).nullspace()
        if ker.rows != 1:
            return None
        w = ker.a[0]
        scale = int(w @ one_vec % p)
        if scale == 0:
            return None
        inv = pow(scale, p - 2, p)
        pts.append(tuple(int(w @ v % p) * inv % p for v in var_vectors))
    return pts


def solve_zero_dim(ideal, method="buchberger", seed=0, max_pairs=None,
                   max_degree=None, shear_tries=8):
    """All F_p-rational points of an affine zero-dimensional ideal plus the
    multiplicity-counted degree of its solution set.

    method "buchberger": reduced degrevlex basis -> staircase -> eliminant
    of a random linear form -> roots -> back-substitution (a direct lex
    read-off handles <= 3 variables in shape position).
    method "staircase": the AffineZeroDim linear-algebra engine; used on
    the pipeline hot path.
    """
    rng = random.Random(seed)
    ring = ideal.ring
    ctx = ring.ctx
    if method == "staircase":
        azd = AffineZeroDim(ideal.gens)
        total = azd.dimension
        var_vecs = azd.variable_nf_vectors()
        one_vec = azd.one_vector()
        for _ in range(shear_tries):
            coeffs = [rng.randrange(ctx.p) for _ in range(ring.nvars)]
            mult = azd.mult_matrix_linear(coeffs)
            pts = _points_from_mult_matrix(ctx, mult, var_vecs, one_vec, rng)
            if pts is not None:
                good = [q for q in pts if all(g.evaluate(q) == 0 for g in ideal.gens)]
                return ZeroDimSolution(good, total)
        raise ShapeFailure("no separating linear form found")

    gb = buchberger(ideal, DRL, max_pairs, max_degree)
    if any(g.degree() == 0 for g in gb.gens):
        return ZeroDimSolution([], 0)
    lms = gb.leading_monomials()
    n = ring.nvars
    caps = [None] * n
    for lm in lms:
        nz = [i for i in range(n) if lm[i]]
        if len(nz) == 1:
            v = nz[0]
            if caps[v] is None or lm[v] < caps[v]:
                caps[v] = lm[v]
    if any(c is None for c in caps):
        raise NotZeroDimensional("staircase complement is infinite")
    stair = []
    def rec(prefix):
        if len(prefix) == n:
            e = tuple(prefix)
            if not any(_divides(lm, e) for lm in lms):
                stair.append(e)
            return
        for k in range(caps[len(prefix)]):
            rec(prefix + [k])
    rec([])
    stair.sort(key=lambda m: (sum(m), m))
    total = len(stair)
    if total == 0:
        return ZeroDimSolution([], 0)
    if n <= 3:
        pts = _solve_lex_direct(ideal, max_pairs, max_degree)
        if pts is not None:
            return ZeroDimSolution(pts, total)
    sidx = {m: i for i, m in enumerate(stair)}
    def nfvec(f):
        g = normal_form(f, gb)
        vec = np.zeros(total, dtype=np.int64)
        for e, c in g.terms.items():
            vec[sidx[e]] = c
        return vec
    var_vecs = [nfvec(ring.var(v)) for v in range(n)]
    one_vec = nfvec(ring.one())
    for _ in range(shear_tries):
        coeffs = [rng.randrange(ctx.p) for _ in range(n)]
        ell = ring.from_terms({tuple(1 if i == v else 0 for i in range(n)): coeffs[v]
                               for v in range(n)})
        mult = np.zeros((total, total), dtype=np.int64)
        for j, b in enumerate(stair):
            mult[:, j] = nfvec(ell.mul_term(b, 1))
        pts = _points_from_mult_matrix(ctx, mult, var_vecs, one_vec, rng)
        if pts is not None:
            good = [q for q in pts if all(g.evaluate(q) == 0 for g in ideal.gens)]
            return ZeroDimSolution(good, total)
    raise ShapeFailure("no separating linear form found")


def _solve_lex_direct(ideal, max_pairs, max_degree):
    """Shape-position lex read-off; None when the basis is not triangular
    in the convenient way."""
    ring = ideal.ring
    n = ring.nvars
    try:
        gb = buchberger(ideal, Lex(), max_pairs, max_degree)
    except ResourceLimit:
        return None
    uni = None
    for g in gb.gens:
        if all(all(e[i] == 0 for i in range(n - 1)) for e in g.terms):
            uni = g
            break
    if uni is None:
        return None
    from .unipoly import UniPoly
    coeffs = [0] * (uni.degree() + 1)
    for e, c in uni.terms.items():
        coeffs[e[n - 1]] = c
    roots = UniPoly(ring.ctx, coeffs).roots()
    # need each earlier variable expressed as var - h(later vars), linear LT
    partial = []
    for v in range(n - 1):
        cand = None
        for g in gb.gens:
            lm = g.leading_monomial(Lex())
            if lm == tuple(1 if i == v else 0 for i in range(n)):
                cand = g
                break
        if cand is None:
            return None
        partial.append(cand)
    pts = []
    for r in sorted(roots):
        point = [0] * n
        point[n - 1] = r
        ok = True
        for v in range(n - 2, -1, -1):
            g = partial[v]
            # g = x_v + tail(x_(v+1)..x_n); solve x_v
            tail_val = 0
            for e, c in g.terms.items():
                if e == tuple(1 if i == v else 0 for i in range(n)):
                    continue
                if any(e[i] for i in range(v + 1)):
                    ok = False
                    break
                t = c
                for i in range(v + 1, n):
                    t = t * pow(point[i], e[i], ring.p) % ring.p
                tail_val = (tail_val + t) % ring.p
            if not ok:
                break
            point[v] = (-tail_val) % ring.p
        if not ok:
            return None
        if all(g.evaluate(tuple(point)) == 0 for g in ideal.gens):
            pts.append(tuple(point))
    return pts

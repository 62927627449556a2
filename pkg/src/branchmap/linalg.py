"""Exact dense linear algebra over F_p on int64 numpy arrays.

Row reduction is vectorized but follows the sequential elimination order,
so results are bit-identical run to run.  Products of two reduced entries
stay below 2**63 for any modulus up to ~3e9, far above the supported range.
"""

import numpy as np

from .errors import Inconsistent
from .field import FieldCtx
from .mpoly import monomials_of_degree
from .unipoly import UniPoly, lcm as uni_lcm


class ModMatrix:
    __slots__ = ("ctx", "a")

    def __init__(self, ctx, entries):
        if isinstance(ctx, int):
            ctx = FieldCtx(ctx)
        self.ctx = ctx
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        self.a = a % ctx.p

    @classmethod
    def zeros(cls, ctx, rows, cols):
        return cls(ctx, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, ctx, n):
        return cls(ctx, np.eye(n, dtype=np.int64))

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def __repr__(self):
        return f"ModMatrix(F_{self.ctx.p}, {self.rows}x{self.cols})"

    def copy(self):
        return ModMatrix(self.ctx, self.a.copy())

    def __eq__(self, other):
        return (isinstance(other, ModMatrix) and self.ctx == other.ctx
                and self.a.shape == other.a.shape and bool(np.all(self.a == other.a)))

    def mul(self, other):
        return ModMatrix(self.ctx, _matmul_mod(self.a, other.a, self.ctx.p))

    def mul_vec(self, v):
        return _matmul_mod(self.a, np.asarray(v, dtype=np.int64).reshape(-1, 1), self.ctx.p).ravel()

    def rref(self):
        """Reduced row echelon form; returns (ModMatrix, pivot column list)."""
        r, pivots = rref_array(self.a, self.ctx.p)
        return ModMatrix(self.ctx, r), pivots

    def rank(self):
        return len(self.rref()[1])

    def row_space_basis(self):
        r, pivots = self.rref()
        return ModMatrix(self.ctx, r.a[: len(pivots)])

    def nullspace(self):
        """Basis of the right kernel, one vector per row of the result."""
        r, pivots = rref_array(self.a, self.ctx.p)
        p = self.ctx.p
        n = self.cols
        pivot_set = set(pivots)
        free = [j for j in range(n) if j not in pivot_set]
        basis = np.zeros((len(free), n), dtype=np.int64)
        for k, j in enumerate(free):
            basis[k, j] = 1
            for i, pc in enumerate(pivots):
                basis[k, pc] = (-int(r[i, j])) % p
        return ModMatrix(self.ctx, basis)

    def solve(self, rhs):
        """One solution x of A x = rhs; raises Inconsistent if none."""
        p = self.ctx.p
        b = np.asarray(rhs, dtype=np.int64).reshape(-1, 1) % p
        aug = np.hstack([self.a, b])
        r, pivots = rref_array(aug, p)
        n = self.cols
        x = np.zeros(n, dtype=np.int64)
        for i, pc in enumerate(pivots):
            if pc == n:
                raise Inconsistent("no solution")
            x[pc] = r[i, n]
        return x

    def transpose(self):
        return ModMatrix(self.ctx, self.a.T.copy())

    def stack(self, other):
        return ModMatrix(self.ctx, np.vstack([self.a, other.a]))

    def solve_batch(self, rhs):
        """Solutions X of A X = rhs for a whole right-hand-side block."""
        p = self.ctx.p
        b = np.asarray(rhs, dtype=np.int64) % p
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        aug = np.hstack([self.a, b])
        r, pivots = rref_array(aug, p)
        n = self.cols
        if any(pc >= n for pc in pivots):
            raise Inconsistent("no solution")
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = r[i, n:]
        return x


def _matmul_mod(a, b, p):
    # chunk the inner dimension so int64 accumulation cannot overflow
    n = a.shape[1]
    step = max(1, (1 << 62) // max(1, (p - 1) * (p - 1)))
    if n <= step:
        return (a @ b) % p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, step):
        acc = (acc + a[:, s:s + step] @ b[s:s + step]) % p
    return acc


def rref_array(a, p):
    """RREF of an int64 array mod p.  Returns (array, pivots).

    Reduction mod p is deferred: factors and pivot rows stay below p, so
    accumulated entries are bounded by #pivots * p^2 < 2^63 for any
    dimension in scope; one final mod normalizes.
    """
    m = a % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = m[r:, c] % p
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] %= p
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        factors = m[:, c] % p
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            m[hit] -= factors[hit, None] * m[r]
        pivots.append(c)
        r += 1
    m %= p
    return m, pivots


def reduce_rows_against(vectors, basis, pivots, p):
    """Reduce row vectors modulo a row space given in RREF form.

    basis: RREF rows (2-D array), pivots: their pivot columns.
    Returns the fully reduced residual rows.
    """
    v = np.array(vectors, dtype=np.int64) % p
    if v.ndim == 1:
        v = v.reshape(1, -1)
    for i, c in enumerate(pivots):
        f = v[:, c].copy()
        hit = np.nonzero(f)[0]
        if hit.size:
            v[hit] = (v[hit] - f[hit, None] * basis[i]) % p
    return v


def minpoly_of_matrix(ctx, mat, rng, tries=3):
    """Minimal polynomial of a square matrix over F_p via Krylov sequences.

    lcm over `tries` random starting vectors; failure probability is
    O((n/p)^tries).
    """
    n = mat.shape[0]
    p = ctx.p
    if n == 0:
        return UniPoly.one(ctx)
    result = UniPoly.one(ctx)
    for _ in range(tries):
        v = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        rows = [v]
        w = v
        for _ in range(n):
            w = _matmul_mod(mat, w.reshape(-1, 1), p).ravel()
            rows.append(w)
        k = np.array(rows, dtype=np.int64)
        # first linearly dependent prefix gives the local minimal polynomial
        r, pivots = rref_array(k.T.copy(), p)
        dep = len(pivots)  # rows 0..dep-1 independent, row `dep` dependent
        sub = ModMatrix(ctx, k[:dep].T)
        coeffs = sub.solve(k[dep])
        mp = UniPoly(ctx, [(-int(c)) % p for c in coeffs] + [0] * 0)
        mp = UniPoly(ctx, mp.coeffs + [0] * (dep - len(mp.coeffs)) + [1])
        result = uni_lcm(result, mp)
        if result.degree == n:
            break
    return result


def graded_piece_basis(polys, degree):
    """Matrix whose rows span { m*g : g in polys, deg(m*g) = degree } in the
    canonical monomial-coefficient basis of forms of the given degree."""
    from .mpoly import monomial_positions
    polys = [g for g in polys if not g.is_zero()]
    if not polys:
        raise ValueError("need at least one nonzero polynomial")
    ring = polys[0].ring
    n = ring.nvars
    ncols = len(monomials_of_degree(n, degree))
    blocks = []
    for g in polys:
        if not g.is_homogeneous():
            raise ValueError("graded pieces need homogeneous input")
        d = g.degree()
        if d > degree:
            continue
        exps = np.array(list(g.terms.keys()), dtype=np.int64)
        coeffs = np.array(list(g.terms.values()), dtype=np.int64)
        shifts = np.array(monomials_of_degree(n, degree - d), dtype=np.int64)
        s, t = shifts.shape[0], exps.shape[0]
        combined = (shifts[:, None, :] + exps[None, :, :]).reshape(s * t, n)
        cols = monomial_positions(combined, n, degree)
        block = np.zeros((s, ncols), dtype=np.int64)
        block[np.repeat(np.arange(s), t), cols] = np.tile(coeffs, s)
        blocks.append(block)
    if not blocks:
        return ModMatrix.zeros(ring.ctx, 0, ncols)
    return ModMatrix(ring.ctx, np.vstack(blocks))


def graded_piece_dim(polys, degree):
    return graded_piece_basis(polys, degree).rank()


def random_invertible(ctx, n, rng):
    while True:
        m = np.array([[rng.randrange(ctx.p) for _ in range(n)] for _ in range(n)],
                     dtype=np.int64)
        if ModMatrix(ctx, m).rank() == n:
            return m


def invert_matrix(ctx, m):
    n = m.shape[0]
    aug = np.hstack([m % ctx.p, np.eye(n, dtype=np.int64)])
    r, pivots = rref_array(aug, ctx.p)
    if pivots != list(range(n)):
        raise Inconsistent("matrix not invertible")
    return r[:, n:]


def intersect_row_spaces(a, b):
    """Basis of (row space of a)∩(row space of b); both ModMatrix."""
    ctx = a.ctx
    if a.rows == 0 or b.rows == 0:
        return ModMatrix.zeros(ctx, 0, a.cols)
    stacked = np.hstack([a.a.T, (-b.a.T) % ctx.p])
    ker = ModMatrix(ctx, stacked).nullspace()
    if ker.rows == 0:
        return ModMatrix.zeros(ctx, 0, a.cols)
    combos = _matmul_mod(ker.a[:, : a.rows], a.a, ctx.p)
    return ModMatrix(ctx, combos).row_space_basis()

"""Univariate polynomials over F_p: coefficient lists, lowest degree first.

Carrier for eliminants of zero-dimensional systems and for the cubic in
the pencil parameter used by the degree-2 reconstruction.
"""

from .errors import DegreeTooLarge, DivisionByZero

SCAN_PRIME_BOUND = 1 << 10  # below this, exhaustive root scan beats splitting


def trim(coeffs, p):
    c = [x % p for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return c


class UniPoly:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.coeffs = trim(coeffs, ctx.p)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [])

    @classmethod
    def one(cls, ctx):
        return cls(ctx, [1])

    @classmethod
    def x(cls, ctx):
        return cls(ctx, [0, 1])

    @classmethod
    def from_roots(cls, ctx, roots):
        f = cls.one(ctx)
        for r in roots:
            f = f * cls(ctx, [-r, 1])
        return f

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __repr__(self):
        if self.is_zero():
            return "UniPoly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c:
                parts.append(f"{c}*x^{i}" if i else str(c))
        return "UniPoly(" + " + ".join(parts) + ")"

    def __add__(self, other):
        p = self.ctx.p
        n = max(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        return UniPoly(self.ctx, [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p
                                  for i in range(n)])

    def __sub__(self, other):
        p = self.ctx.p
        n = max(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        return UniPoly(self.ctx, [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p
                                  for i in range(n)])

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(self.ctx)
        p = self.ctx.p
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % p
        return UniPoly(self.ctx, out)

    def scale(self, c):
        p = self.ctx.p
        c %= p
        return UniPoly(self.ctx, [a * c % p for a in self.coeffs])

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return self.scale(self.ctx.inv(lead))

    def divmod(self, other):
        if other.is_zero():
            raise DivisionByZero("division by zero polynomial")
        p = self.ctx.p
        rem = list(self.coeffs)
        dn, dd = len(rem) - 1, other.degree
        if dn < dd:
            return UniPoly.zero(self.ctx), self
        inv_lead = self.ctx.inv(other.coeffs[-1])
        quo = [0] * (dn - dd + 1)
        for k in range(dn - dd, -1, -1):
            c = rem[k + dd] * inv_lead % p
            if c:
                quo[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = (rem[k + j] - c * b) % p
        return UniPoly(self.ctx, quo), UniPoly(self.ctx, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self):
        p = self.ctx.p
        return UniPoly(self.ctx, [i * self.coeffs[i] % p for i in range(1, len(self.coeffs))])

    def evaluate(self, a):
        p = self.ctx.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * a + c) % p
        return acc

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self):
        """f / gcd(f, f'), monic.  Requires deg f < p so the derivative
        criterion for repeated factors is valid."""
        if self.is_zero():
            raise DivisionByZero("squarefree part of 0")
        if self.degree >= self.ctx.p:
            raise DegreeTooLarge(f"degree {self.degree} >= p = {self.ctx.p}")
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self.monic()
        q, r = self.divmod(g)
        assert r.is_zero()
        return q.monic()

    def powmod(self, e, modulus):
        result = UniPoly.one(self.ctx)
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def roots(self):
        """All roots in F_p, as a set.

        Splits off the product of (x - r) via gcd(f, x^p - x), then applies
        equal-degree splitting; falls back to an exhaustive scan for tiny p.
        """
        if self.is_zero():
            raise DivisionByZero("roots of the zero polynomial")
        ctx = self.ctx
        if self.degree == 0:
            return set()
        if ctx.p <= SCAN_PRIME_BOUND:
            return self._roots_by_scan()
        f = self.monic()
        # gcd(f, x^p - x) keeps exactly the linear factors over F_p
        xp = UniPoly.x(ctx).powmod(ctx.p, f)
        g = f.gcd(xp - UniPoly.x(ctx))
        out = set()
        self._split_linear(g, out, salt=0)
        return out

    def _split_linear(self, g, out, salt):
        """Cantor-Zassenhaus on a product of distinct linear factors."""
        ctx = self.ctx
        if g.degree <= 0:
            return
        if g.degree == 1:
            a, b = g.coeffs[0], g.coeffs[1]
            out.add((-a) * ctx.inv(b) % ctx.p)
            return
        if g.evaluate(0) == 0:
            out.add(0)
            x = UniPoly.x(ctx)
            g = g // x
            self._split_linear(g, out, salt)
            return
        half = (ctx.p - 1) // 2
        shift = salt
        while True:
            shift += 1
            if shift > 4 * ctx.p:  # unreachable in practice; scan keeps correctness
                for r in self._roots_by_scan_of(g):
                    out.add(r)
                return
            probe = UniPoly(ctx, [shift % ctx.p, 1]).powmod(half, g) - UniPoly.one(ctx)
            h = g.gcd(probe)
            if 0 < h.degree < g.degree:
                break
        self._split_linear(h, out, shift)
        q, r = g.divmod(h)
        assert r.is_zero()
        self._split_linear(q, out, shift)

    def _roots_by_scan(self):
        return self._roots_by_scan_of(self)

    def _roots_by_scan_of(self, g):
        return {a for a in range(g.ctx.p) if g.evaluate(a) == 0}


def lcm(f, g):
    d = f.gcd(g)
    q, r = (f * g).divmod(d)
    assert r.is_zero()
    return q.monic()


def from_eval_table(ctx, pairs):
    """Lagrange interpolation through (x, y) pairs with distinct x."""
    f = UniPoly.zero(ctx)
    xs = [x for x, _ in pairs]
    for i, (xi, yi) in enumerate(pairs):
        num = UniPoly.one(ctx)
        den = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * UniPoly(ctx, [-xj, 1])
            den = den * (xi - xj) % ctx.p
        f = f + num.scale(yi * ctx.inv(den))
    return f

"""Sparse multivariate polynomials over F_p with pluggable monomial orders.

Monomials are plain exponent tuples.  Polynomials are immutable once
built: term dicts must never be mutated after construction, so values can
be shared freely across threads.
"""

import re
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DivisionByZero, InexactDivision, SingularSubstitution
from .field import FieldCtx


# ---------------------------------------------------------------------------
# monomial orders

class MonomialOrder:
    """Total, multiplicative well-order on exponent tuples.

    key(m) is a sortable object; larger key = larger monomial.
    """

    def key(self, exps):
        raise NotImplementedError

    def leading(self, terms):
        return max(terms, key=self.key)


class DegRevLex(MonomialOrder):
    name = "degrevlex"

    def key(self, exps):
        return (sum(exps), tuple(-e for e in reversed(exps)))

    def __repr__(self):
        return "DegRevLex()"


class Lex(MonomialOrder):
    name = "lex"

    def key(self, exps):
        return exps

    def __repr__(self):
        return "Lex()"


class Block(MonomialOrder):
    """Eliminates the first k variables: degrevlex on each block,
    first block dominant."""

    name = "block"

    def __init__(self, k):
        self.k = k

    def key(self, exps):
        a, b = exps[: self.k], exps[self.k:]
        return (sum(a), tuple(-e for e in reversed(a)),
                sum(b), tuple(-e for e in reversed(b)))

    def __repr__(self):
        return f"Block({self.k})"


DRL = DegRevLex()
LEX = Lex()


# ---------------------------------------------------------------------------
# monomial enumeration (canonical: degrevlex-descending)

@lru_cache(maxsize=None)
def monomials_of_degree(nvars, degree):
    """Exponent tuples of total degree `degree`, degrevlex-descending."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for bars in combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        exps = []
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(degree + nvars - 2 - prev)
        out.append(tuple(exps))
    out.sort(key=DRL.key, reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_up_to_degree(nvars, degree):
    """All exponent tuples of total degree <= degree, graded-descending."""
    out = []
    for d in range(degree, -1, -1):
        out.extend(monomials_of_degree(nvars, d))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars, degree):
    return {m: i for i, m in enumerate(monomials_of_degree(nvars, degree))}


@lru_cache(maxsize=None)
def monomial_index_up_to(nvars, degree):
    return {m: i for i, m in enumerate(monomials_up_to_degree(nvars, degree))}


@lru_cache(maxsize=None)
def _key_table(nvars, degree, upto):
    """Vectorized exponent-tuple -> index translation via radix keys."""
    mons = monomials_up_to_degree(nvars, degree) if upto \
        else monomials_of_degree(nvars, degree)
    arr = np.array(mons, dtype=np.int64)
    strides = np.array([(degree + 1) ** i for i in range(nvars)], dtype=np.int64)
    keys = arr @ strides
    order = np.argsort(keys, kind="stable")
    return strides, keys[order], np.asarray(order, dtype=np.int64)


def monomial_positions(exps, nvars, degree, upto=False):
    """Indices of exponent rows (2-D int array) in the canonical monomial
    enumeration; all rows must be valid monomials of the enumeration."""
    strides, sorted_keys, order = _key_table(nvars, degree, upto)
    keys = np.asarray(exps, dtype=np.int64) @ strides
    pos = np.searchsorted(sorted_keys, keys)
    return order[pos]


# ---------------------------------------------------------------------------
# rings and polynomials

class PolyRing:
    __slots__ = ("ctx", "names")

    def __init__(self, ctx, names):
        if isinstance(ctx, int):
            ctx = FieldCtx(ctx)
        self.ctx = ctx
        self.names = tuple(names)

    @property
    def nvars(self):
        return len(self.names)

    @property
    def p(self):
        return self.ctx.p

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.ctx == other.ctx and self.names == other.names

    def __hash__(self):
        return hash((self.ctx, self.names))

    def __repr__(self):
        return f"PolyRing(F_{self.p}, {','.join(self.names)})"

    def zero(self):
        return MPoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c %= self.p
        if c == 0:
            return self.zero()
        return MPoly(self, {(0,) * self.nvars: c})

    def var(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return MPoly(self, {tuple(e): 1})

    def gens(self):
        return tuple(self.var(i) for i in range(self.nvars))

    def monomial(self, exps, coeff=1):
        coeff %= self.p
        if coeff == 0:
            return self.zero()
        return MPoly(self, {tuple(exps): coeff})

    def from_terms(self, terms):
        p = self.p
        clean = {}
        for exps, c in terms.items() if isinstance(terms, dict) else terms:
            c %= p
            if c:
                e = tuple(exps)
                prior = clean.get(e)
                if prior is None:
                    clean[e] = c
                else:
                    s = (prior + c) % p
                    if s:
                        clean[e] = s
                    else:
                        del clean[e]
        return MPoly(self, clean)

    def random_form(self, degree, rng, homogeneous=True):
        mons = monomials_of_degree(self.nvars, degree) if homogeneous \
            else monomials_up_to_degree(self.nvars, degree)
        return self.from_terms({m: rng.randrange(self.p) for m in mons})

    def parse(self, text):
        return parse_poly(self, text)


class MPoly:
    __slots__ = ("ring", "terms", "_homog")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._homog = None

    # -- basic structure ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        if self._homog is None:
            degs = {sum(e) for e in self.terms}
            self._homog = len(degs) <= 1
        return self._homog

    def num_terms(self):
        return len(self.terms)

    def sorted_terms(self, order=DRL):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order=DRL):
        if not self.terms:
            raise ValueError("leading monomial of 0")
        return order.leading(self.terms)

    def leading_coeff(self, order=DRL):
        return self.terms[self.leading_monomial(order)]

    def monic(self, order=DRL):
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        if lc == 1:
            return self
        return self.scale(self.ring.ctx.inv(lc))

    def __repr__(self):
        return f"MPoly({format_poly(self)})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.ring, out)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = (out.get(e, 0) - c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.ring, out)

    def __neg__(self):
        p = self.ring.p
        return MPoly(self.ring, {e: p - c for e, c in self.terms.items()})

    def scale(self, c):
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        return MPoly(self.ring, {e: c * v % p for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        p = self.ring.p
        if not self.terms or not other.terms:
            return self.ring.zero()
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        if (len(a) * len(b) > 40000 and self.ring.nvars == 3
                and self.is_homogeneous() and other.is_homogeneous()):
            return _mul_ternary_via_arrays(self, other)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = (out.get(e, 0) + ca * cb) % p
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.ring, out)

    def mul_term(self, exps, coeff):
        p = self.ring.p
        coeff %= p
        if coeff == 0 or not self.terms:
            return self.ring.zero()
        return MPoly(self.ring, {tuple(x + y for x, y in zip(e, exps)): c * coeff % p
                                 for e, c in self.terms.items()})

    def __pow__(self, n):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, divisor, order=DRL):
        """Quotient q with q * divisor == self; raises InexactDivision
        if the single-divisor reduction leaves a remainder."""
        if divisor.is_zero():
            raise DivisionByZero("division by zero polynomial")
        ring = self.ring
        p = ring.p
        lm_d = divisor.leading_monomial(order)
        lc_d_inv = ring.ctx.inv(divisor.terms[lm_d])
        div_terms = list(divisor.terms.items())
        rem = dict(self.terms)
        quo = {}
        key = order.key
        while rem:
            lm = max(rem, key=key)
            diff = tuple(a - b for a, b in zip(lm, lm_d))
            if any(d < 0 for d in diff):
                raise InexactDivision("remainder is nonzero")
            c = rem[lm] * lc_d_inv % p
            quo[diff] = c
            for e, v in div_terms:
                t = tuple(x + y for x, y in zip(e, diff))
                s = (rem.get(t, 0) - c * v) % p
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MPoly(ring, quo)

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except InexactDivision:
            return False

    # -- calculus and evaluation ---------------------------------------------

    def derivative(self, v):
        p = self.ring.p
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k == 0:
                continue
            c2 = c * k % p
            if c2:
                e2 = list(e)
                e2[v] = k - 1
                out[tuple(e2)] = c2
        return MPoly(self.ring, out)

    def evaluate(self, point):
        p = self.ring.p
        max_e = [0] * self.ring.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                if x > max_e[i]:
                    max_e[i] = x
        powers = []
        for i, v in enumerate(point):
            row = [1] * (max_e[i] + 1)
            for k in range(1, max_e[i] + 1):
                row[k] = row[k - 1] * v % p
            powers.append(row)
        acc = 0
        for e, c in self.terms.items():
            t = c
            for i, x in enumerate(e):
                if x:
                    t = t * powers[i][x] % p
            acc = (acc + t) % p
        return acc

    def substitute(self, images):
        """Ring morphism sending var i to images[i] (list of MPoly in any
        common ring)."""
        ring_out = images[0].ring
        max_e = [0] * self.ring.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                if x > max_e[i]:
                    max_e[i] = x
        pows = []
        for i, g in enumerate(images):
            row = [ring_out.one()]
            for _ in range(max_e[i]):
                row.append(row[-1] * g)
            pows.append(row)
        acc = ring_out.zero()
        for e, c in self.terms.items():
            t = ring_out.const(c)
            for i, x in enumerate(e):
                if x:
                    t = t * pows[i][x]
            acc = acc + t
        return acc

    def substitute_linear(self, matrix):
        """Compose with the invertible linear change vars <- M * vars."""
        n = self.ring.nvars
        arr = np.asarray(matrix, dtype=np.int64) % self.ring.p
        if arr.shape != (n, n):
            raise SingularSubstitution(f"expected {n}x{n} matrix")
        from .linalg import ModMatrix
        if ModMatrix(self.ring.ctx, arr).rank() < n:
            raise SingularSubstitution("substitution matrix is singular")
        if n == 3 and self.is_homogeneous() and not self.is_zero():
            lin = [self.ring.from_terms({tuple(1 if j == k else 0 for k in range(3)): int(arr[i, j])
                                         for j in range(3)}) for i in range(3)]
            return compose_ternary(self, lin)
        images = [self.ring.from_terms({tuple(1 if j == k else 0 for k in range(n)): int(arr[i, j])
                                        for j in range(n)}) for i in range(n)]
        return self.substitute(images)

    def dehomogenize(self, v):
        """Set variable v to 1, dropping it from the ring."""
        names = self.ring.names[:v] + self.ring.names[v + 1:]
        ring_out = PolyRing(self.ring.ctx, names)
        out = {}
        p = ring_out.p
        for e, c in self.terms.items():
            e2 = e[:v] + e[v + 1:]
            s = (out.get(e2, 0) + c) % p
            if s:
                out[e2] = s
            else:
                out.pop(e2, None)
        return MPoly(ring_out, out)

    def homogenize(self, ring_out, v, degree=None):
        """Insert variable v (index in ring_out) to reach `degree`."""
        if degree is None:
            degree = self.degree()
        out = {}
        for e, c in self.terms.items():
            d = sum(e)
            if d > degree:
                raise ValueError("degree too small to homogenize")
            e2 = e[:v] + (degree - d,) + e[v:]
            out[e2] = c
        return MPoly(ring_out, out)

    def coeff_vector(self, degree=None, upto=False):
        """Coefficient row over the canonical monomial basis."""
        n = self.ring.nvars
        if upto:
            idx = monomial_index_up_to(n, degree)
        else:
            if degree is None:
                degree = self.degree()
            idx = monomial_index(n, degree)
        vec = np.zeros(len(idx), dtype=np.int64)
        for e, c in self.terms.items():
            vec[idx[e]] = c
        return vec


def poly_from_vector(ring, vec, degree, upto=False):
    mons = monomials_up_to_degree(ring.nvars, degree) if upto \
        else monomials_of_degree(ring.nvars, degree)
    return ring.from_terms({m: int(c) for m, c in zip(mons, vec) if c % ring.p})


def proportional(f, g):
    """True if f = c*g for a nonzero scalar c."""
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    if set(f.terms) != set(g.terms):
        return False
    p = f.ring.p
    e0 = next(iter(f.terms))
    c = f.terms[e0] * f.ring.ctx.inv(g.terms[e0]) % p
    return all(v == c * g.terms[e] % p for e, v in f.terms.items())


# ---------------------------------------------------------------------------
# dense ternary kernel: fast composition for homogeneous forms in 3 variables

def ternary_to_array(f, degree):
    """Homogeneous ternary form -> int64 array A[i,j] = coeff of x^i y^j z^(d-i-j)."""
    arr = np.zeros((degree + 1, degree + 1), dtype=np.int64)
    for (i, j, _k), c in f.terms.items():
        arr[i, j] = c
    return arr


def ternary_from_array(ring, arr, degree):
    p = ring.p
    arr = arr % p
    ii, jj = np.nonzero(arr)
    return MPoly(ring, {(int(i), int(j), degree - int(i) - int(j)): int(arr[i, j])
                        for i, j in zip(ii, jj)})


def _mul_dense_sparse(arr, deg_a, g_terms, deg_g, p):
    """Dense array of degree deg_a times sparse term list of degree deg_g."""
    out = np.zeros((deg_a + deg_g + 1, deg_a + deg_g + 1), dtype=np.int64)
    na = deg_a + 1
    for (i, j, _k), c in g_terms:
        out[i:i + na, j:j + na] += c * arr
    return out % p


def _mul_ternary_via_arrays(f, g):
    """Homogeneous ternary product through a dense coefficient array;
    the sparser factor supplies the shift list."""
    if f.num_terms() < g.num_terms():
        f, g = g, f
    p = f.ring.p
    arr = ternary_to_array(f, f.degree())
    out = _mul_dense_sparse(arr, f.degree(), list(g.terms.items()), g.degree(), p)
    return ternary_from_array(f.ring, out, f.degree() + g.degree())


def compose_ternary(f, images):
    """f(images) for homogeneous ternary f and three equal-degree ternary
    forms, via nested Horner on dense coefficient arrays.

    Intermediate products stay below 2**63: entries < p^2 * terms(g) with
    p = 32003 and at most a few hundred accumulations.
    """
    ring = images[0].ring
    p = ring.p
    if f.is_zero():
        return ring.zero()
    if not f.is_homogeneous():
        raise ValueError("compose_ternary needs a homogeneous form")
    D = f.degree()
    m = images[0].degree()
    g0, g1, g2 = images
    t0 = list(g0.terms.items())
    t1 = list(g1.terms.items())
    t2 = list(g2.terms.items())
    if D == 0:
        return ring.const(next(iter(f.terms.values())))
    # powers of g2 as dense arrays
    pow2 = [np.ones((1, 1), dtype=np.int64)]
    for k in range(1, D + 1):
        pow2.append(_mul_dense_sparse(pow2[-1], (k - 1) * m, t2, m, p))
    # coefficient table: coeff[(a, b)] with a + b <= D
    coeff = {}
    for (a, b, _c), v in f.terms.items():
        coeff[(a, b)] = v
    acc = None  # runs over a = D .. 0, Horner in g0
    for a in range(D, -1, -1):
        k = D - a
        # G_a = sum_b coeff[a,b] g1^b g2^(k-b), Horner in g1
        ga = None
        for b in range(k, -1, -1):
            c = coeff.get((a, b), 0)
            if ga is None:
                if c == 0:
                    continue
                ga = c * pow2[k - b] % p
                ga_deg = (k - b) * m
                continue
            ga = _mul_dense_sparse(ga, ga_deg, t1, m, p)
            ga_deg += m
            if c:
                arr = pow2[k - b]
                ga[: arr.shape[0], : arr.shape[1]] += c * arr
                ga %= p
        if ga is not None and ga_deg < k * m:
            big = np.zeros((k * m + 1, k * m + 1), dtype=np.int64)
            big[: ga.shape[0], : ga.shape[1]] = ga
            ga, ga_deg = big, k * m
        if acc is None:
            acc = ga if ga is not None else np.zeros((k * m + 1, k * m + 1), dtype=np.int64)
            acc_deg = k * m
            continue
        acc = _mul_dense_sparse(acc, acc_deg, t0, m, p)
        acc_deg += m
        if ga is not None:
            acc[: ga.shape[0], : ga.shape[1]] += ga
            acc %= p
    return ternary_from_array(ring, acc, D * m)


# ---------------------------------------------------------------------------
# text grammar: `3*x^2*y - z^3`, whitespace-insensitive

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[\^\*\+\-]))")


def parse_poly(ring, text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"bad character in polynomial at {text[pos:pos+10]!r}")
        pos = m.end()
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            tokens.append(("var", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    var_index = {n: i for i, n in enumerate(ring.names)}
    terms = []
    i = 0
    n = len(tokens)
    if n == 0:
        raise ValueError("empty polynomial text")
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise ValueError("dangling sign in polynomial text")
        coeff = sign
        exps = [0] * ring.nvars
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if kind == "op":
                if val == "*":
                    i += 1
                    expect_factor = True
                    continue
                break  # + or - starts the next term
            if not expect_factor:
                raise ValueError(f"missing '*' before {val!r}")
            if kind == "int":
                coeff *= val
                i += 1
            else:
                if val not in var_index:
                    raise ValueError(f"unknown variable {val!r}")
                v = var_index[val]
                e = 1
                i += 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "int":
                        raise ValueError("expected integer exponent after '^'")
                    e = tokens[i][1]
                    i += 1
                exps[v] += e
            expect_factor = False
        if expect_factor:
            raise ValueError("dangling '*' in polynomial text")
        terms.append((tuple(exps), coeff))
    return ring.from_terms(terms)


def format_poly(f, order=DRL):
    if f.is_zero():
        return "0"
    names = f.ring.names
    parts = []
    for e, c in f.sorted_terms(order):
        factors = []
        for i, x in enumerate(e):
            if x == 1:
                factors.append(names[i])
            elif x > 1:
                factors.append(f"{names[i]}^{x}")
        if not factors:
            body = str(c)
        elif c == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(c)] + factors)
        parts.append(body)
    return " + ".join(parts)

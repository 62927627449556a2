"""Prime field context: arithmetic mod an odd prime p (default 32003)."""

from .errors import DivisionByZero

DEFAULT_PRIME = 32003


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FieldCtx:
    """Arithmetic in F_p.  Elements are plain ints in [0, p).

    p must be a prime >= 5 so that Hessians, duals and the degree-2
    reconstruction (which divides by 2 and 3) stay valid.
    """

    __slots__ = ("p",)

    def __init__(self, p=DEFAULT_PRIME):
        if not is_prime(p) or p < 5:
            raise ValueError(f"modulus must be a prime >= 5, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.p == other.p

    def __hash__(self):
        return hash(("FieldCtx", self.p))

    def __repr__(self):
        return f"FieldCtx({self.p})"

    def reduce(self, a):
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a % self.p, e, self.p)

    def rand(self, rng):
        return rng.randrange(self.p)

    def rand_nonzero(self, rng):
        return rng.randrange(1, self.p)

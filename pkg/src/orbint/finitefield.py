"""Exact arithmetic in F_{p^m} with a canonical, reproducible modulus.

Elements are coefficient tuples over F_p (length m, order c_0..c_{m-1}).
The modulus is the lexicographically least monic irreducible polynomial of
the given degree, comparing coefficient tuples (c_0, c_1, ...); this makes
values reproducible across implementations without a Conway table.

Everything here is deterministic: no randomness, no dict-order dependence.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import OrbintError


def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _poly_trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    a = list(a)
    db, db1 = len(b) - 1, len(b)
    if db1 == 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - db1, -1, -1):
        c = (a[i + db] * inv) % p
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return _poly_trim(q), _poly_trim(a[:db])


def _poly_gcd(a, b, p):
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple((x * inv) % p for x in a)
    return a


def _poly_powmod(a, e, mod, p):
    result = (1,)
    a = _poly_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_divmod(_poly_mul(result, a, p), mod, p)[1]
        a = _poly_divmod(_poly_mul(a, a, p), mod, p)[1]
        e >>= 1
    return result


def _is_irreducible(f, p):
    # Rabin test: x^(p^m) = x mod f and gcd(x^(p^(m/r)) - x, f) = 1 for
    # prime divisors r of m.
    m = len(f) - 1
    x = (0, 1)
    xq = _poly_powmod(x, p ** m, f, p)
    if _poly_trim(_poly_add(xq, tuple(-c % p for c in x), p)):
        return False
    r = m
    primes = set()
    d = 2
    while d * d <= r:
        if r % d == 0:
            primes.add(d)
            while r % d == 0:
                r //= d
        d += 1
    if r > 1:
        primes.add(r)
    for rr in primes:
        xe = _poly_powmod(x, p ** (m // rr), f, p)
        g = _poly_gcd(_poly_add(xe, tuple(-c % p for c in x), p), f, p)
        if len(g) - 1 > 0:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p, m):
    """Lex-least monic irreducible of degree m over F_p, as a tuple c_0..c_m."""
    if m == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=m):
        f = tail + (1,)
        if f[0] == 0:
            continue
        if _is_irreducible(f, p):
            return f
    raise OrbintError(f"no irreducible polynomial of degree {m} over F_{p}")


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FqField:
    """The field F_q, q = p^m, with its canonical defining polynomial.

    Elements are `FqElt` instances; `zero`, `one` and `gen` are cached.
    """

    _instances = {}

    def __new__(cls, p, m=1):
        key = (p, m)
        if key not in cls._instances:
            cls._instances[key] = super().__new__(cls)
        return cls._instances[key]

    def __init__(self, p, m=1):
        if getattr(self, "_ready", False):
            return
        if not _is_prime(p):
            raise OrbintError(f"{p} is not prime")
        if m < 1:
            raise OrbintError("extension degree must be positive")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = canonical_modulus(p, m)
        self.zero = FqElt(self, (0,) * m)
        self.one = FqElt(self, (1,) + (0,) * (m - 1))
        self.gen = FqElt(self, ((0, 1) + (0,) * m)[:m])
        # lazy operation caches (worth it: fields here are tiny)
        self._mul_cache = {} if self.q <= 4096 else None
        self._inv_cache = {} if self.q <= 4096 else None
        self._ready = True

    def __repr__(self):
        return f"FqField(p={self.p}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, FqField) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash(("FqField", self.p, self.m))

    def elt(self, value):
        """Coerce an integer or coefficient iterable to a field element."""
        if isinstance(value, FqElt):
            if value.field == self:
                return value
            raise OrbintError("cross-field coercion requires embed()")
        if isinstance(value, int):
            c = [0] * self.m
            c[0] = value % self.p
            return FqElt(self, tuple(c))
        c = list(value)
        if len(c) > self.m:
            raise OrbintError("coefficient vector too long")
        c += [0] * (self.m - len(c))
        return FqElt(self, tuple(x % self.p for x in c))

    def from_int_index(self, k):
        """The k-th element in the canonical (base-p digit) enumeration."""
        c = []
        for _ in range(self.m):
            c.append(k % self.p)
            k //= self.p
        return FqElt(self, tuple(c))

    def elements(self):
        """All q elements, in the canonical deterministic order."""
        for k in range(self.q):
            yield self.from_int_index(k)

    def frobenius(self, x, j=1):
        """x ** (q^j) -- the arithmetic q-power Frobenius iterated j times."""
        return x ** (self.q ** j)


class FqElt:
    """An element of F_{p^m}: immutable coefficient tuple over F_p."""

    __slots__ = ("field", "c")

    def __init__(self, field, coeffs):
        self.field = field
        self.c = coeffs

    def __repr__(self):
        return f"Fq({list(self.c)})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.elt(other)
        return isinstance(other, FqElt) and self.c == other.c and self.field == other.field

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def sort_key(self):
        return self.c

    def __add__(self, other):
        if isinstance(other, int):
            other = self.field.elt(other)
        p = self.field.p
        return FqElt(self.field, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElt(self.field, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.field.elt(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.field.elt(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.elt(other)
        f = self.field
        cache = f._mul_cache
        if cache is not None:
            key = (self.c, other.c)
            hit = cache.get(key)
            if hit is not None:
                return hit
        prod = _poly_mul(_poly_trim(self.c), _poly_trim(other.c), f.p)
        rem = _poly_divmod(prod, f.modulus, f.p)[1]
        out = f.elt(rem)
        if cache is not None:
            cache[key] = out
            cache[(other.c, self.c)] = out
        return out

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in FqField")
        f = self.field
        cache = f._inv_cache
        if cache is not None:
            hit = cache.get(self.c)
            if hit is not None:
                return hit
        out = self._inverse_impl()
        if cache is not None:
            cache[self.c] = out
        return out

    def _inverse_impl(self):
        f = self.field
        # extended Euclid on (modulus, self)
        a, b = f.modulus, _poly_trim(self.c)
        s0, s1 = (), (1,)
        while b:
            q, r = _poly_divmod(a, b, f.p)
            a, b = b, r
            s0, s1 = s1, _poly_add(s0, tuple(-x % f.p for x in _poly_mul(q, s1, f.p)), f.p)
        inv = pow(a[-1], f.p - 2, f.p)
        s0 = tuple((x * inv) % f.p for x in s0)
        return f.elt(s0)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.field.elt(other)
        return self * other.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frob(self, q=None):
        """Arithmetic Frobenius x -> x^q (default: the base-field q is p)."""
        return self ** (q if q is not None else self.field.p)

    def in_subfield(self, q):
        """True iff x lies in the subfield of order q (x^q = x)."""
        return self ** q == self


# ---------------------------------------------------------------------------
# Polynomials over FqField (dense, coefficient lists low-to-high).
# Used by the tame factorization machinery for residual polynomials.
# ---------------------------------------------------------------------------


def fqpoly_trim(coeffs):
    i = len(coeffs)
    while i > 0 and not coeffs[i - 1]:
        i -= 1
    return list(coeffs[:i])


def fqpoly_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else None
        y = b[i] if i < len(b) else None
        if x is None:
            out.append(y)
        elif y is None:
            out.append(x)
        else:
            out.append(x + y)
    return fqpoly_trim(out)


def fqpoly_scale(a, s):
    return fqpoly_trim([x * s for x in a])


def fqpoly_mul(a, b):
    if not a or not b:
        return []
    field = a[0].field
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return fqpoly_trim(out)


def fqpoly_divmod(a, b):
    b = fqpoly_trim(b)
    if not b:
        raise ZeroDivisionError
    a = list(a)
    inv = b[-1].inverse()
    q = [b[-1].field.zero] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        if c:
            q[i] = c
            for j, y in enumerate(b):
                a[i + j] = a[i + j] - c * y
    return fqpoly_trim(q), fqpoly_trim(a[: len(b) - 1])


def fqpoly_gcd(a, b):
    a, b = fqpoly_trim(a), fqpoly_trim(b)
    while b:
        a, b = b, fqpoly_divmod(a, b)[1]
    if a:
        a = fqpoly_scale(a, a[-1].inverse())
    return a


def fqpoly_powmod(a, e, mod):
    field = mod[0].field if mod and isinstance(mod[0], FqElt) else a[0].field
    result = [field.one]
    a = fqpoly_divmod(a, mod)[1]
    while e:
        if e & 1:
            result = fqpoly_divmod(fqpoly_mul(result, a), mod)[1]
        a = fqpoly_divmod(fqpoly_mul(a, a), mod)[1]
        e >>= 1
    return result


def fqpoly_deriv(a):
    out = []
    for i in range(1, len(a)):
        out.append(a[i] * i)
    return fqpoly_trim(out)


def fqpoly_eval(a, x):
    field = x.field
    acc = field.zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


def fqpoly_roots(f, field):
    """All roots in `field` of a squarefree polynomial, canonically ordered.

    Deterministic equal-degree splitting: trial elements are taken in the
    canonical enumeration order of the field, so results are reproducible.
    """
    f = fqpoly_trim(list(f))
    if not f:
        raise OrbintError("zero polynomial has no well-defined root set")
    roots = []
    # strip root 0
    while len(f) > 1 and not f[0]:
        roots.append(field.zero)
        f = f[1:]
    if len(f) <= 1:
        return sorted(roots, key=lambda r: r.sort_key())
    q = field.q
    x = [field.zero, field.one]
    xq = fqpoly_powmod(x, q, f)
    g = fqpoly_gcd(fqpoly_add(xq, fqpoly_scale(x, -field.one)), f)
    # g = product of (t - root) over roots in `field`
    stack = [g]
    while stack:
        h = fqpoly_trim(stack.pop())
        if len(h) - 1 <= 0:
            continue
        if len(h) - 1 == 1:
            roots.append(-h[0] / h[1])
            continue
        split = None
        for k in range(q):
            u = field.from_int_index(k)
            # gcd((t+u)^((q-1)/2) - 1, h) splits h for odd q
            trial = fqpoly_powmod([u, field.one], (q - 1) // 2, h)
            trial = fqpoly_add(trial, [-field.one])
            d = fqpoly_gcd(trial, h)
            if 0 < len(d) - 1 < len(h) - 1:
                split = d
                break
        if split is None:
            raise OrbintError("equal-degree splitting failed (should not happen)")
        stack.append(split)
        stack.append(fqpoly_divmod(h, split)[0])
    return sorted(roots, key=lambda r: r.sort_key())


def fqpoly_is_squarefree(f):
    return len(fqpoly_gcd(f, fqpoly_deriv(f))) - 1 <= 0

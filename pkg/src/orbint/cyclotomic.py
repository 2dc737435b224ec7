"""Exact arithmetic in Q(zeta_m) for m <= 4.

All identity checks in the acceptance suite are exact equalities of such
numbers; no floating point appears anywhere.  Elements are coefficient
tuples of Fractions modulo the m-th cyclotomic polynomial:

    m = 1, 2 : degree 1 (rational; zeta_2 = -1)
    m = 3    : x^2 + x + 1
    m = 4    : x^2 + 1
"""

from __future__ import annotations

from fractions import Fraction

_DEG = {1: 1, 2: 1, 3: 2, 4: 2}


class Cyclotomic:
    __slots__ = ("m", "c")

    def __init__(self, m, coeffs):
        if m not in _DEG:
            raise ValueError(f"unsupported cyclotomic order {m}")
        deg = _DEG[m]
        c = [Fraction(x) for x in coeffs]
        c += [Fraction(0)] * (deg - len(c))
        self.m = m
        self.c = tuple(c[:deg])

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, m=1):
        return cls(m, [])

    @classmethod
    def one(cls, m=1):
        return cls(m, [1])

    @classmethod
    def rational(cls, x, m=1):
        return cls(m, [Fraction(x)])

    @classmethod
    def root_of_unity(cls, m, exponent):
        """exp(2 pi i * exponent) as an element of Q(zeta_m).

        exponent is a Fraction mod 1 whose denominator must divide m.
        """
        e = Fraction(exponent) % 1
        if m % e.denominator != 0:
            raise ValueError(f"exponent {e} not representable in Q(zeta_{m})")
        k = int(e * m) % m
        if m in (1, 2):
            return cls(m, [(-1) ** k if m == 2 else 1])
        deg = _DEG[m]
        # zeta^k reduced mod the cyclotomic polynomial
        if m == 4:
            table = {0: [1, 0], 1: [0, 1], 2: [-1, 0], 3: [0, -1]}
            return cls(m, table[k])
        # m == 3: zeta^2 = -1 - zeta
        table = {0: [1, 0], 1: [0, 1], 2: [-1, -1]}
        return cls(m, table[k])

    # -- coercion ---------------------------------------------------------------

    def _coerce_pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(other, self.m)
        if not isinstance(other, Cyclotomic):
            return None, None
        a, b = self, other
        if a.m == b.m:
            return a, b
        if a.is_rational():
            return Cyclotomic(b.m, [a.c[0]]), b
        if b.is_rational():
            return a, Cyclotomic(a.m, [b.c[0]])
        raise ValueError("mixed cyclotomic orders")

    def is_rational(self):
        return all(x == 0 for x in self.c[1:])

    def as_rational(self):
        return self.c[0] if self.is_rational() else None

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, [-x for x in self.c])

    def __sub__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.m, [x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.m, [x * Fraction(other) for x in self.c])
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        if _DEG[a.m] == 1:
            return Cyclotomic(a.m, [a.c[0] * b.c[0]])
        a0, a1 = a.c
        b0, b1 = b.c
        if a.m == 4:  # zeta^2 = -1
            return Cyclotomic(4, [a0 * b0 - a1 * b1, a0 * b1 + a1 * b0])
        # m == 3: zeta^2 = -1 - zeta
        hi = a1 * b1
        return Cyclotomic(3, [a0 * b0 - hi, a0 * b1 + a1 * b0 - hi])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == Fraction(other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        try:
            a, b = self._coerce_pair(other)
        except ValueError:
            ra, rb = self.as_rational(), other.as_rational()
            return ra is not None and ra == rb
        return a.c == b.c

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.m, self.c))

    def __repr__(self):
        if self.is_rational():
            return f"{self.c[0]}"
        terms = [f"{self.c[0]}"] if self.c[0] else []
        if self.c[1]:
            terms.append(f"{self.c[1]}*z{self.m}")
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        if self.is_rational():
            return str(self.c[0])
        return {"order": self.m, "coeffs": [str(x) for x in self.c]}

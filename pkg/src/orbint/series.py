"""Truncated power series and Laurent elements over F_{q^m}.

A TruncSeries with precision N is an element of F[[e]] / e^N, coefficients
low-to-high.  Arithmetic never extends precision silently: binary
operations carry the min of the operand precisions (an explicit shift by
e^k is exact and raises precision by k).

The series literal grammar used by case files is parsed here: terms
``c*e^k`` joined by ``+`` (also bare ``c``, ``e``, ``e^k``), integer
coefficients taken mod p.  Malformed input raises ParseError with a
1-based column.
"""

from __future__ import annotations

from .errors import ParseError, PrecisionExhausted
from .finitefield import FqElt


class TruncSeries:
    """Element of F[[e]]/e^N with tracked precision N."""

    __slots__ = ("field", "prec", "c")

    def __init__(self, field, coeffs, prec):
        if prec < 1:
            raise PrecisionExhausted("series precision dropped below 1")
        coeffs = list(coeffs)[:prec]
        coeffs += [field.zero] * (prec - len(coeffs))
        self.field = field
        self.prec = prec
        self.c = tuple(coeffs)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls, field, prec):
        return cls(field, [], prec)

    @classmethod
    def one(cls, field, prec):
        return cls(field, [field.one], prec)

    @classmethod
    def monomial(cls, field, coeff, k, prec):
        c = [field.zero] * prec
        if k < prec:
            c[k] = coeff
        return cls(field, c, prec)

    # -- basic structure -----------------------------------------------------

    def __repr__(self):
        terms = []
        for i, x in enumerate(self.c):
            if x:
                terms.append(f"{list(x.c)}*e^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} (mod e^{self.prec})>"

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        return self.c[:n] == other.c[:n]

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def valuation(self):
        """Smallest i with c_i != 0, or None if zero at this precision."""
        for i, x in enumerate(self.c):
            if x:
                return i
        return None

    def is_unit(self):
        return bool(self.c[0])

    def truncate(self, prec):
        if prec > self.prec:
            raise PrecisionExhausted("cannot extend precision by truncation")
        return TruncSeries(self.field, self.c[:prec], prec)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, int):
            return TruncSeries(self.field, [self.field.elt(other)], self.prec)
        if isinstance(other, FqElt):
            return TruncSeries(self.field, [other], self.prec)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.prec, other.prec)
        return TruncSeries(self.field, [a + b for a, b in zip(self.c[:n], other.c[:n])], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.field, [-a for a in self.c], self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, FqElt):
            return TruncSeries(self.field, [a * other for a in self.c], self.prec)
        if isinstance(other, int):
            s = self.field.elt(other)
            return TruncSeries(self.field, [a * s for a in self.c], self.prec)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.prec, other.prec)
        zero = self.field.zero
        out = [zero] * n
        for i, x in enumerate(self.c[:n]):
            if x:
                for j, y in enumerate(other.c[: n - i]):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return TruncSeries(self.field, out, n)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by e^k (k >= 0 exact; k < 0 requires divisibility)."""
        if k >= 0:
            return TruncSeries(self.field, [self.field.zero] * k + list(self.c), self.prec + k)
        if any(self.c[:-k]):
            raise PrecisionExhausted("negative shift of a non-divisible series")
        return TruncSeries(self.field, self.c[-k:], self.prec + k)

    def unit_inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("inverse of a non-unit series")
        n = self.prec
        inv0 = self.c[0].inverse()
        out = [inv0] + [self.field.zero] * (n - 1)
        for i in range(1, n):
            s = self.field.zero
            for j in range(1, i + 1):
                s = s + self.c[j] * out[i - j]
            out[i] = -(inv0 * s)
        return TruncSeries(self.field, out, n)

    def __truediv__(self, other):
        """Division; the divisor's valuation must not exceed the dividend's."""
        other = self._coerce(other)
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by zero-at-precision series")
        if v == 0:
            return self * other.unit_inverse()
        sv = self.valuation()
        if sv is None or sv < v:
            raise PrecisionExhausted("quotient is not integral at this precision")
        return self.shift(-v) * other.shift(-v).unit_inverse()

    def __pow__(self, e):
        result = TruncSeries.one(self.field, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def map_coeffs(self, fn, field=None):
        field = field or self.field
        return TruncSeries(field, [fn(x) for x in self.c], self.prec)

    def frobenius(self, q):
        """Coefficientwise x -> x^q (the arithmetic Frobenius, e fixed)."""
        return self.map_coeffs(lambda x: x ** q)

    def sort_key(self):
        return tuple(x.sort_key() for x in self.c)


class LaurentElt:
    """Element of F((e)) at a precision window: e^v * unit.

    ``val`` is None for the element that is zero at every tracked order.
    """

    __slots__ = ("val", "unit")

    def __init__(self, val, unit):
        if val is not None and unit is not None and not unit.is_unit():
            raise ValueError("unit part must have nonzero constant term")
        self.val = val
        self.unit = unit

    @classmethod
    def from_series(cls, s):
        v = s.valuation()
        if v is None:
            return cls(None, None)
        return cls(v, s.shift(-v))

    @classmethod
    def zero(cls):
        return cls(None, None)

    def is_zero(self):
        return self.val is None

    def __repr__(self):
        if self.is_zero():
            return "<Laurent 0>"
        return f"<e^{self.val} * {self.unit!r}>"

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return LaurentElt.zero()
        return LaurentElt(self.val + other.val, self.unit * other.unit)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError
        return LaurentElt(-self.val, self.unit.unit_inverse())

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        a = self.unit.shift(self.val - v)
        b = other.unit.shift(other.val - v)
        s = a + b
        w = s.valuation()
        if w is None:
            return LaurentElt.zero()
        return LaurentElt(v + w, s.shift(-w))

    def __neg__(self):
        if self.is_zero():
            return self
        return LaurentElt(self.val, -self.unit)

    def __sub__(self, other):
        return self + (-other)

    def as_series(self, prec):
        """Render as a TruncSeries of the given precision (val must be >= 0)."""
        if self.is_zero():
            field = None
            raise PrecisionExhausted("cannot render exact zero without a field")
        if self.val < 0:
            raise PrecisionExhausted("negative-valuation element is not integral")
        return self.unit.shift(self.val).truncate(prec)


# ---------------------------------------------------------------------------
# Series literal parser:  c | c*e | c*e^k | e | e^k  joined by '+'
# ---------------------------------------------------------------------------


def parse_series(text, field, prec):
    """Parse the case-file series grammar into a TruncSeries.

    Raises ParseError with a 1-based column on malformed input.
    """
    coeffs = {}
    i = 0
    n = len(text)

    def skip_ws(i):
        while i < n and text[i] in " \t":
            i += 1
        return i

    def parse_int(i):
        start = i
        if i < n and text[i] == "-":
            i += 1
        if i >= n or not text[i].isdigit():
            raise ParseError("expected integer", column=start + 1)
        while i < n and text[i].isdigit():
            i += 1
        return int(text[start:i]), i

    expect_term = True
    while True:
        i = skip_ws(i)
        if i >= n:
            if expect_term:
                raise ParseError("expected a term", column=i + 1)
            break
        if not expect_term:
            if text[i] == "+":
                i += 1
                expect_term = True
                continue
            raise ParseError(f"unexpected character {text[i]!r}", column=i + 1)
        # term
        if text[i] == "e":
            coeff = 1
            i += 1
        else:
            coeff, i = parse_int(i)
            i = skip_ws(i)
            if i < n and text[i] == "*":
                star = i
                i += 1
                if i < n and text[i] == "*":
                    raise ParseError("malformed '**' operator", column=star + 1)
                i = skip_ws(i)
                if i >= n or text[i] != "e":
                    raise ParseError("expected 'e' after '*'", column=i + 1)
                i += 1
            else:
                coeffs[0] = coeffs.get(0, 0) + coeff
                expect_term = False
                continue
        # optional exponent
        k = 1
        if i < n and text[i] == "^":
            i += 1
            k, i = parse_int(i)
            if k < 0:
                raise ParseError("negative exponent in integral series", column=i)
        coeffs[k] = coeffs.get(k, 0) + coeff
        expect_term = False

    out = [field.zero] * prec
    for k, cval in coeffs.items():
        if k < prec:
            out[k] = out[k] + field.elt(cval)
    return TruncSeries(field, out, prec)


def emit_series(s):
    """Render a TruncSeries in the case-file grammar (canonical form)."""
    terms = []
    for k, x in enumerate(s.c):
        if not x:
            continue
        if x.field.m != 1:
            raise ValueError("series literals carry prime-field coefficients only")
        cval = x.c[0]
        if k == 0:
            terms.append(f"{cval}")
        elif k == 1:
            terms.append(f"{cval}*e")
        else:
            terms.append(f"{cval}*e^{k}")
    return " + ".join(terms) if terms else "0"

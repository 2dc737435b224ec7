import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbint.errors import ParseError, PrecisionExhausted
from orbint.finitefield import FqField
from orbint.series import TruncSeries, emit_series, parse_series


def test_parse_examples(f3):
    s = parse_series("2*e^2", f3, 8)
    assert s.valuation() == 2
    assert s.c[2] == f3.elt(2)
    t = parse_series("1 + 2*e", f3, 8)
    assert t.c[0] == f3.one and t.c[1] == f3.elt(2)


def test_parse_rejects_with_column(f3):
    with pytest.raises(ParseError) as ex:
        parse_series("2**e", f3, 8)
    assert ex.value.column == 2
    with pytest.raises(ParseError):
        parse_series("", f3, 8)
    with pytest.raises(ParseError):
        parse_series("2*", f3, 8)
    with pytest.raises(ParseError):
        parse_series("e^", f3, 8)


def test_emit_parse_roundtrip(f3):
    for text in ["0", "1", "2*e", "1 + 2*e^3", "e^2"]:
        s = parse_series(text, f3, 10)
        assert parse_series(emit_series(s), f3, 10) == s


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=6))
def test_emit_parse_random(coeffs):
    f3 = FqField(3)
    s = TruncSeries(f3, [f3.elt(c) for c in coeffs], 8)
    assert parse_series(emit_series(s), f3, 8) == s


def test_precision_tracked(f3):
    a = parse_series("1 + e", f3, 6)
    b = parse_series("2*e", f3, 9)
    assert (a * b).prec == 6
    assert (a + b).prec == 6
    assert a.shift(2).prec == 8


def test_unit_inverse(f3):
    a = parse_series("1 + 2*e + e^3", f3, 12)
    assert a * a.unit_inverse() == TruncSeries.one(f3, 12)


def test_division_rules(f3):
    e2 = parse_series("2*e^2", f3, 8)
    e = parse_series("e", f3, 8)
    q = e2 / e
    assert q.valuation() == 1 and q.prec == 7
    with pytest.raises(PrecisionExhausted):
        e / e2


def test_laurent_elements(f3):
    from orbint.series import LaurentElt

    x = LaurentElt.from_series(parse_series("2*e^2 + e^3", f3, 8))
    assert x.val == 2 and x.unit.is_unit()
    y = x.inverse()
    assert y.val == -2
    prod = x * y
    assert prod.val == 0 and prod.unit.c[0] == f3.one
    z = LaurentElt.zero()
    assert z.is_zero() and (x + z).val == 2
    s = x + LaurentElt.from_series(parse_series("1", f3, 8))
    assert s.val == 0
    # cancellation drops to the next valuation
    c = x + LaurentElt.from_series(parse_series("1*e^2", f3, 8))
    assert c.val == 3
    assert x.as_series(6).valuation() == 2

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest

from orbint.finitefield import FqField
from orbint.rootdata import build_root_datum
from orbint.series import TruncSeries
from orbint.spectral import LocalChar, canonical_nonresidue


def mono(field, c, k, prec):
    return TruncSeries.monomial(field, field.elt(c) if isinstance(c, int) else c, k, prec)


def make_char(kind, n, q, coeff_spec, prec=16):
    """LocalChar from a list of {exponent: int-coefficient} dicts."""
    field = FqField(q)
    rd = build_root_datum(kind, n, q)
    coeffs = []
    for spec in coeff_spec:
        s = TruncSeries.zero(field, prec)
        for k, c in spec.items():
            s = s + mono(field, c, k, prec)
        coeffs.append(s)
    return LocalChar(rd, coeffs)


def elliptic_sl2(q, depth, prec=None):
    """The SL2 characteristic (0, -u e^(2 depth)), u the canonical
    non-residue: unramified elliptic of discriminant valuation 2*depth."""
    field = FqField(q)
    prec = prec or (4 * depth + 8)
    rd = build_root_datum("SL", 2, q)
    u = canonical_nonresidue(field)
    return LocalChar(
        rd,
        [TruncSeries.zero(field, prec), TruncSeries.monomial(field, -u, 2 * depth, prec)],
    )


@pytest.fixture(scope="session")
def f3():
    return FqField(3)


@pytest.fixture(scope="session")
def f9():
    return FqField(3, 2)

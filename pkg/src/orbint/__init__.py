"""Exact orbital integrals and affine Springer fiber counts over F_q((e))
for split type-A groups, with checkers for the endoscopic transfer
identity and the isogenous-pair (SL_2/PGL_2) identity at desk scale.

Module map:
  rootdata    -- type-A root data, kappa characters, Smith/coinvariants
  finitefield -- exact F_{p^m} with canonical moduli
  series      -- truncated power series, Laurent elements, literals
  localfield  -- discriminants, Newton polygons, Hensel, tame factorization
  spectral    -- local invariants d, c, s, delta, pi_0, transfer, indices
  springer    -- lattice fibers, orbits, classes, groupoid counts
  orbital     -- measure normalizations, orbital integrals, identity checks
  flcheck     -- case files, corpora, global formulas, reports
  cli         -- the flcheck command line tool
"""

from .cyclotomic import Cyclotomic
from .errors import (
    BadCharacteristic,
    CombinatorialBlowup,
    HypothesisViolated,
    Inconsistent,
    NotCoprime,
    NotGRegular,
    NotRegular,
    OrbintError,
    ParseError,
    PrecisionExhausted,
    Unsupported,
    UnsupportedH,
    UnsupportedKappa,
    UnsupportedOrder,
    WildRamification,
)
from .finitefield import FqField
from .rootdata import (
    FinAbGroup,
    KappaChar,
    RootDatum,
    build_root_datum,
    coinvariants,
    endoscopic_datum,
    nonstandard_pair_check,
    resultant_degree_global,
)
from .series import LaurentElt, TruncSeries, emit_series, parse_series
from .localfield import (
    BranchData,
    disc_valuation,
    factor_tame,
    hensel_lift,
    newton_polygon,
)
from .spectral import (
    HPoint,
    LocalChar,
    LocalInvariants,
    OrderData,
    order_data,
    companion_point,
    compute_invariants,
    detect_simple_case,
    neron_conversion,
    radicial_valuations,
    resultant_valuation_transfer,
    transfer_a,
    unit_index,
)
from .springer import (
    FiberAnalysis,
    FiberPoint,
    Lattice,
    GroupoidCount,
    enumerate_fiber,
    frobenius_and_classes,
    groupoid_count,
    truncation_level,
)
from .orbital import (
    CaseReport,
    MeasureNormalization,
    OrbitalValue,
    kappa_orbital,
    ls_check,
    nonstandard_check,
    stable_orbital_H,
)
from .flcheck import (
    CaseFile,
    emit_case,
    generate_corpus,
    global_formulas,
    parse_case,
    run_case,
    run_corpus,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

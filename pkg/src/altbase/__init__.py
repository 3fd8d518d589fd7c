"""Validated numerics for alternate base numeration systems."""

from . import errors
from .bases import AlternateBase, FieldOps, IntervalOps, RationalOps
from .coding import (
    BInteger,
    Directive,
    GapTable,
    Substitution,
    WindowedBase,
    ar_letter_map,
    ar_to_eta,
    base_from_directive,
    derive_qg_words,
    enumerate_b_integers,
    eta,
    faithful_coding,
    gap_substitution,
    gap_table,
    ncf_to_eta,
    sadic_limit,
)
from .expansion import (
    GreedyExpansion,
    GreedyVerdict,
    greedy_expand,
    is_greedy,
    quasi_greedy_expand_one,
    val_up,
)
from .numerics import Dyadic, IntervalReal, IntPoly, RealAlgebraicField
from .perron import (
    FixedPoint,
    MatrixSeq,
    build_finite_matrices,
    build_parry_matrices,
    check_identities,
    periodic_fixed_point,
)
from .synthesis import (
    BoundsCert,
    Certificate,
    bounds,
    certificate_json,
    certify,
    synthesize_general,
    synthesize_periodic,
    verify_value_one,
)
from .words import (
    DigitStream,
    ExpansionList,
    UPWord,
    canonicalize,
    check_parry,
    parse_word,
    quasi_greedy_transform,
    shift_suffix,
)

__version__ = "0.1.0"

__all__ = [
    "AlternateBase",
    "BInteger",
    "BoundsCert",
    "Certificate",
    "DigitStream",
    "Directive",
    "Dyadic",
    "ExpansionList",
    "FieldOps",
    "FixedPoint",
    "GapTable",
    "GreedyExpansion",
    "GreedyVerdict",
    "IntPoly",
    "IntervalOps",
    "IntervalReal",
    "MatrixSeq",
    "RationalOps",
    "RealAlgebraicField",
    "Substitution",
    "UPWord",
    "WindowedBase",
    "ar_letter_map",
    "ar_to_eta",
    "base_from_directive",
    "bounds",
    "build_finite_matrices",
    "build_parry_matrices",
    "canonicalize",
    "certificate_json",
    "certify",
    "check_identities",
    "check_parry",
    "derive_qg_words",
    "enumerate_b_integers",
    "errors",
    "eta",
    "faithful_coding",
    "gap_substitution",
    "gap_table",
    "greedy_expand",
    "is_greedy",
    "ncf_to_eta",
    "parse_word",
    "periodic_fixed_point",
    "quasi_greedy_expand_one",
    "quasi_greedy_transform",
    "sadic_limit",
    "shift_suffix",
    "synthesize_general",
    "synthesize_periodic",
    "val_up",
    "verify_value_one",
]

"""Weighted filtrations, osculating nilpotent groups, Helffer-Nourrigat cones,
principal symbols and spectral hypoellipticity tests.

The heavy lifting happens in the C++ extension `_hypocalc`; this package
re-exports its operations.
"""

from _hypocalc import (  # noqa: F401
    PairingMap,
    bch,
    bch_series,
    bracket,
    check_hormander,
    coadjoint,
    dilate,
    evaluate_field,
    fiber_dims,
    flow_order_test,
    flow_time_one,
    free_nilpotent,
    harmonic_check,
    hypoellipticity_verdict,
    membership,
    model_spectrum,
    osculating_at,
    parse_print_field,
    realize_symbol,
    sample_cone,
    symbol_character,
    weighted_order,
)

__all__ = [
    "PairingMap",
    "bch",
    "bch_series",
    "bracket",
    "check_hormander",
    "coadjoint",
    "dilate",
    "evaluate_field",
    "fiber_dims",
    "flow_order_test",
    "flow_time_one",
    "free_nilpotent",
    "harmonic_check",
    "hypoellipticity_verdict",
    "membership",
    "model_spectrum",
    "osculating_at",
    "parse_print_field",
    "realize_symbol",
    "sample_cone",
    "symbol_character",
    "weighted_order",
]

__version__ = "0.1.0"

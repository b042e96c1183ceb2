"""Semiring-generic weighted finite-state transducers.

Composition with an epsilon filter, weighted determinization, weight pushing
and weighted minimization, with a brute-force path oracle for testing.
"""

from .compose import compose
from .determinize import (
    HasTwins,
    Inconclusive,
    ViolationWitness,
    determinize,
    twins_check_bounded,
)
from .errors import (
    CompositionError,
    DomainError,
    FstError,
    FstParseError,
    NonDeterminable,
    NoPathError,
    OracleInapplicable,
    RingMismatchError,
    UnsupportedError,
)
from .fst import EPSILON, Arc, Fst, connect, is_deterministic
from .minimize import equivalence_pushed, minimize
from .oracle import StringPair, count_matching_paths, equivalent, oracle_weight
from .reweight import push_weights, shortest_distance_to_final, shortest_path
from .semiring import (
    LOG,
    PROBABILITY,
    TROPICAL,
    Semiring,
    Weight,
    approx_eq,
    get_ring,
    left_divide,
    oplus,
    otimes,
)
from .textio import SymbolTable, read_fst, write_fst

__all__ = [
    "Arc", "CompositionError", "DomainError", "EPSILON", "Fst", "FstError",
    "FstParseError", "HasTwins", "Inconclusive", "LOG", "NoPathError",
    "NonDeterminable", "OracleInapplicable", "PROBABILITY", "RingMismatchError",
    "Semiring", "StringPair", "SymbolTable", "TROPICAL", "UnsupportedError",
    "ViolationWitness", "Weight", "approx_eq", "compose", "connect",
    "count_matching_paths", "determinize", "equivalence_pushed", "equivalent",
    "get_ring", "is_deterministic", "left_divide", "minimize", "oplus",
    "oracle_weight", "otimes", "push_weights", "read_fst",
    "shortest_distance_to_final", "shortest_path", "twins_check_bounded",
    "write_fst",
]

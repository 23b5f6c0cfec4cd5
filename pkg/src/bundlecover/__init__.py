"""Finite covers of punctured tori and first Betti numbers of their mapping tori."""

from .cover import (
    FillError,
    NoLiftingPower,
    PermCover,
    build_cover,
    fiber_product,
    find_lifts,
    grid_cover,
    minimal_lifting_power,
    orbifold_fill,
    punctured_torus,
)
from .exact_algebra import Perm
from .fpgroup import FPGroup, FreeAut, FreeWord, NotAnAutomorphism, parse_aut, twist_word_aut
from .homology import H1Basis, betti_mapping_torus, betti_oracle, h1_action
from .pipeline import BettiReport, run_case1, run_case2, run_multik, run_reduction
from .triangle import SearchExhausted, find_triangle_quotient

__version__ = "0.1.0"

__all__ = [
    "BettiReport",
    "FPGroup",
    "FillError",
    "FreeAut",
    "FreeWord",
    "H1Basis",
    "NoLiftingPower",
    "NotAnAutomorphism",
    "PermCover",
    "SearchExhausted",
    "betti_mapping_torus",
    "betti_oracle",
    "Perm",
    "build_cover",
    "fiber_product",
    "find_triangle_quotient",
    "find_lifts",
    "grid_cover",
    "h1_action",
    "minimal_lifting_power",
    "orbifold_fill",
    "parse_aut",
    "punctured_torus",
    "run_case1",
    "run_case2",
    "run_multik",
    "run_reduction",
    "twist_word_aut",
]
